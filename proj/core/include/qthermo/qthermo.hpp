#pragma once

#include "qthermo/algebra.hpp"
#include "qthermo/bimodule.hpp"
#include "qthermo/catalog.hpp"
#include "qthermo/channel.hpp"
#include "qthermo/index.hpp"
#include "qthermo/modular.hpp"
#include "qthermo/numerics.hpp"
#include "qthermo/random.hpp"
#include "qthermo/thermo.hpp"
