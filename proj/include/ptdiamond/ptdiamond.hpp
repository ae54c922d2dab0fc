/**
 * @file ptdiamond.hpp
 * @brief Umbrella header.
 */
#pragma once

#include "ptdiamond/bands.hpp"
#include "ptdiamond/cls.hpp"
#include "ptdiamond/config.hpp"
#include "ptdiamond/diagnostics.hpp"
#include "ptdiamond/errors.hpp"
#include "ptdiamond/evolve.hpp"
#include "ptdiamond/expm.hpp"
#include "ptdiamond/model.hpp"
#include "ptdiamond/output.hpp"
#include "ptdiamond/runner.hpp"
