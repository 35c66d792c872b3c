#ifndef VOLCOL_VOLCOL_HPP
#define VOLCOL_VOLCOL_HPP

#include "volcol/greedy.hpp"
#include "volcol/hardness.hpp"
#include "volcol/linalg.hpp"
#include "volcol/oracle.hpp"
#include "volcol/sampler.hpp"
#include "volcol/symfunc.hpp"
#include "volcol/types.hpp"

#endif  // VOLCOL_VOLCOL_HPP
