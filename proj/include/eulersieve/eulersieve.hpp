#pragma once

#include "core.hpp"
#include "hamming.hpp"
#include "pq.hpp"
#include "sieves.hpp"
#include "streams.hpp"
#include "variants.hpp"
#include "wheels.hpp"
