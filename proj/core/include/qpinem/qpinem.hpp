#pragma once

#include "qpinem/amplifier.hpp"
#include "qpinem/coupling.hpp"
#include "qpinem/diagnostics.hpp"
#include "qpinem/errors.hpp"
#include "qpinem/fock.hpp"
#include "qpinem/io.hpp"
#include "qpinem/nnls.hpp"
#include "qpinem/recon.hpp"
#include "qpinem/scattering.hpp"
#include "qpinem/special.hpp"
#include "qpinem/version.hpp"
#include "qpinem/walker.hpp"
