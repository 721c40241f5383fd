#ifndef PIVOTAL_PIVOTAL_HPP
#define PIVOTAL_PIVOTAL_HPP

#include "pivotal/bayes.hpp"
#include "pivotal/config_io.hpp"
#include "pivotal/convolution.hpp"
#include "pivotal/coverage.hpp"
#include "pivotal/density.hpp"
#include "pivotal/errors.hpp"
#include "pivotal/grid.hpp"
#include "pivotal/inference.hpp"
#include "pivotal/noise.hpp"
#include "pivotal/rng.hpp"
#include "pivotal/sampling.hpp"

#endif  // PIVOTAL_PIVOTAL_HPP
