#pragma once

#include "bandit_lab/agents.hpp"
#include "bandit_lab/attackers.hpp"
#include "bandit_lab/bounds.hpp"
#include "bandit_lab/config.hpp"
#include "bandit_lab/coverage.hpp"
#include "bandit_lab/engine.hpp"
#include "bandit_lab/env.hpp"
#include "bandit_lab/error.hpp"
#include "bandit_lab/output.hpp"
#include "bandit_lab/presets.hpp"
