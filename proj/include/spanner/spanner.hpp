#pragma once

// Umbrella header for the document-spanner enumeration engine.

#include "spanner/bench.hpp"
#include "spanner/bool_matrix.hpp"
#include "spanner/core.hpp"
#include "spanner/enumerate.hpp"
#include "spanner/extended_va.hpp"
#include "spanner/glushkov.hpp"
#include "spanner/jump_index.hpp"
#include "spanner/mapping_dag.hpp"
#include "spanner/naive.hpp"
#include "spanner/oracle.hpp"
#include "spanner/regex_ast.hpp"
#include "spanner/va.hpp"
