#ifndef UGRAV_UGRAV_HPP
#define UGRAV_UGRAV_HPP

#include "ugrav/domain.hpp"
#include "ugrav/errors.hpp"
#include "ugrav/ingest.hpp"
#include "ugrav/linalg.hpp"
#include "ugrav/oracle.hpp"
#include "ugrav/report.hpp"
#include "ugrav/solver.hpp"
#include "ugrav/statics.hpp"

#endif  // UGRAV_UGRAV_HPP
