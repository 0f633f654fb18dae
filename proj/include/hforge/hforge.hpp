#pragma once

#include <hforge/construction.hpp>
#include <hforge/density.hpp>
#include <hforge/errors.hpp>
#include <hforge/estimate.hpp>
#include <hforge/geometry.hpp>
#include <hforge/ifs.hpp>
#include <hforge/interval.hpp>
#include <hforge/measure.hpp>
#include <hforge/search.hpp>
