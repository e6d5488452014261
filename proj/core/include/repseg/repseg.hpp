#pragma once

#include "repseg/accumulator.hpp"
#include "repseg/config.hpp"
#include "repseg/corrupt.hpp"
#include "repseg/dataset.hpp"
#include "repseg/errors.hpp"
#include "repseg/features.hpp"
#include "repseg/image.hpp"
#include "repseg/metric.hpp"
#include "repseg/pipeline.hpp"
#include "repseg/propagate.hpp"
#include "repseg/report.hpp"
#include "repseg/rng.hpp"
#include "repseg/splash.hpp"
#include "repseg/superpixel.hpp"
#include "repseg/sweep.hpp"
#include "repseg/synth.hpp"
