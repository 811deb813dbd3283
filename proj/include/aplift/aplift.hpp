#pragma once

#include <aplift/ap_lift.hpp>
#include <aplift/certificate.hpp>
#include <aplift/core_sets.hpp>
#include <aplift/dsl.hpp>
#include <aplift/jset.hpp>
#include <aplift/largeness.hpp>
#include <aplift/set_expr.hpp>
#include <aplift/towers.hpp>
#include <aplift/vdw.hpp>
#include <aplift/version.hpp>
