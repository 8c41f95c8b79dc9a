#pragma once

#include "ladder/numerics.hpp"
#include "ladder/strategy.hpp"
#include "ladder/rates.hpp"
#include "ladder/pricer.hpp"
#include "ladder/mc_oracle.hpp"
#include "ladder/config.hpp"
#include "ladder/cli.hpp"
