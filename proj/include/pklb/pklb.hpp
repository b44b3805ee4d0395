#pragma once

// Umbrella header: the whole library in one include.

#include "pklb/bigfloat.hpp"
#include "pklb/dfr.hpp"
#include "pklb/errors.hpp"
#include "pklb/intlattice.hpp"
#include "pklb/io.hpp"
#include "pklb/kem.hpp"
#include "pklb/latticecode.hpp"
#include "pklb/mrecipient.hpp"
#include "pklb/params.hpp"
#include "pklb/pke.hpp"
#include "pklb/pmf.hpp"
#include "pklb/quantize.hpp"
#include "pklb/ring.hpp"
#include "pklb/symmetric.hpp"
