#pragma once
//
// Umbrella header for the numerical library (the CLI layer lives in cli.hpp).

#include <weldkit/boundary.hpp>
#include <weldkit/circle.hpp>
#include <weldkit/error.hpp>
#include <weldkit/inverse.hpp>
#include <weldkit/io.hpp>
#include <weldkit/kernel.hpp>
#include <weldkit/kernel_function.hpp>
#include <weldkit/operator.hpp>
#include <weldkit/specialfn.hpp>
#include <weldkit/welding.hpp>
