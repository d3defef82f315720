#ifndef CAVPROT_CAVPROT_HPP
#define CAVPROT_CAVPROT_HPP

#include "bounds.hpp"
#include "dynamics.hpp"
#include "faddeeva.hpp"
#include "fft.hpp"
#include "io.hpp"
#include "presets.hpp"
#include "quadrature.hpp"
#include "spectral.hpp"
#include "tomography.hpp"
#include "units.hpp"

#endif // CAVPROT_CAVPROT_HPP
