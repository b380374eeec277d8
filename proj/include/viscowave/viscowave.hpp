#pragma once

#include "viscowave/acoustics.hpp"
#include "viscowave/csv.hpp"
#include "viscowave/duality.hpp"
#include "viscowave/error.hpp"
#include "viscowave/functions.hpp"
#include "viscowave/measure.hpp"
#include "viscowave/parallel.hpp"
#include "viscowave/serialize.hpp"
