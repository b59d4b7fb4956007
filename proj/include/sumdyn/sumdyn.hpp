#ifndef SUMDYN_SUMDYN_HPP
#define SUMDYN_SUMDYN_HPP

#include "appendix_a2.hpp"
#include "bitvec.hpp"
#include "certificate.hpp"
#include "checks.hpp"
#include "cli.hpp"
#include "ergodic.hpp"
#include "errors.hpp"
#include "finite_set.hpp"
#include "function_spec.hpp"
#include "json_io.hpp"
#include "nilsystem.hpp"
#include "omega.hpp"
#include "parallel.hpp"
#include "progressive.hpp"
#include "rational.hpp"
#include "searcher.hpp"
#include "setspec.hpp"
#include "straus.hpp"
#include "sumsets.hpp"
#include "torus.hpp"

#endif
