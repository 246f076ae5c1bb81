#pragma once

#include "antrope/distributions.hpp"
#include "antrope/engines.hpp"
#include "antrope/format.hpp"
#include "antrope/harmonic.hpp"
#include "antrope/io.hpp"
#include "antrope/kahan.hpp"
#include "antrope/model.hpp"
#include "antrope/normal.hpp"
#include "antrope/rational.hpp"
#include "antrope/rng.hpp"
#include "antrope/stats.hpp"
