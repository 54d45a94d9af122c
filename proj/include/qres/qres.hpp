#pragma once

#include "qres/census.hpp"
#include "qres/criterion.hpp"
#include "qres/empirical.hpp"
#include "qres/error.hpp"
#include "qres/factor.hpp"
#include "qres/hyperplane.hpp"
#include "qres/modular.hpp"
#include "qres/parallel.hpp"
#include "qres/square.hpp"
