#pragma once
// Umbrella header.
#include "ssd/numerics.hpp"
#include "ssd/construct.hpp"
#include "ssd/scatter.hpp"
#include "ssd/verify.hpp"
#include "ssd/io.hpp"
#include "ssd/jobs.hpp"
#include "ssd/commands.hpp"
