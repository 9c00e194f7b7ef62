#ifndef TIGHTPOW_TIGHTPOW_HPP
#define TIGHTPOW_TIGHTPOW_HPP

#include "errors.hpp"
#include "hypergraph.hpp"
#include "rational.hpp"
#include "power_paths.hpp"
#include "gadgets.hpp"
#include "phi.hpp"
#include "random.hpp"
#include "embed.hpp"
#include "pipeline.hpp"
#include "oracle.hpp"
#include "sweep.hpp"

#endif  // TIGHTPOW_TIGHTPOW_HPP
