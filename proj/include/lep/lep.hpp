#pragma once

#include "lep/campaign.hpp"
#include "lep/conformal.hpp"
#include "lep/explorer.hpp"
#include "lep/hexlattice.hpp"
#include "lep/looperase.hpp"
#include "lep/observables.hpp"
#include "lep/oracle.hpp"
#include "lep/parallel.hpp"
#include "lep/rng.hpp"
#include "lep/scalingfit.hpp"
#include "lep/sleformula.hpp"
#include "lep/stats.hpp"
