#pragma once

#include <entrolen/crossed_product.hpp>
#include <entrolen/entropy.hpp>
#include <entrolen/fields.hpp>
#include <entrolen/folner.hpp>
#include <entrolen/groups.hpp>
#include <entrolen/linalg.hpp>
#include <entrolen/rational.hpp>
#include <entrolen/shift_modules.hpp>
#include <entrolen/tiling.hpp>
#include <entrolen/cli.hpp>
