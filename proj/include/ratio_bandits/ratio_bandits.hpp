#pragma once

#include "ratio_bandits/conjugate.hpp"
#include "ratio_bandits/envs.hpp"
#include "ratio_bandits/errors.hpp"
#include "ratio_bandits/harness.hpp"
#include "ratio_bandits/karmed.hpp"
#include "ratio_bandits/linear.hpp"
#include "ratio_bandits/models.hpp"
#include "ratio_bandits/policies.hpp"
#include "ratio_bandits/random.hpp"
#include "ratio_bandits/results_io.hpp"
#include "ratio_bandits/scoring.hpp"
