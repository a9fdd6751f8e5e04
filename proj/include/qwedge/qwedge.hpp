#pragma once

#include "qwedge/errors.hpp"
#include "qwedge/scalar/laurent_poly.hpp"
#include "qwedge/scalar/prime_field.hpp"
#include "qwedge/scalar/ratfunc.hpp"
#include "qwedge/scalar/series.hpp"
#include "qwedge/linalg/leg_space.hpp"
#include "qwedge/linalg/sparse_matrix.hpp"
#include "qwedge/linalg/dense.hpp"
#include "qwedge/linalg/dense_mod.hpp"
#include "qwedge/frt/bundle.hpp"
#include "qwedge/braid/permutation_table.hpp"
#include "qwedge/braid/braid_forms.hpp"
#include "qwedge/rank/rank_engine.hpp"
#include "qwedge/exterior/exterior_calc.hpp"
#include "qwedge/theorem/theorem_verifier.hpp"
#include "qwedge/report/report.hpp"
#include "qwedge/report/config.hpp"
#include "qwedge/report/cache.hpp"
#include "qwedge/report/manifest.hpp"
#include "qwedge/report/runner.hpp"
