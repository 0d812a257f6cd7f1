#pragma once

#include <vector>

#include "tangotower/certificate.hpp"

namespace tango {

/// Grid bounds for the impossibility searches. Defaults match the
/// acceptance-scale desk runs; enlarging them changes no verdict.
struct SearchBounds {
  long p_max = 97;
  long k_max = 10000;
  long l_max = 6;
  long r_max = 100;
};

/// Exhaustive scan for towers one step above a curve with trivial canonical
/// class: solves pk - p - k - 1 = 0 over primes p <= p_max, 2 <= k <= k_max,
/// gcd(p,k) = 1, then contradicts each solution through the base-curve degree
/// inequality deg K >= p deg D (1 >= pk in D'-units). Verdict: Impossible.
Certificate surface_k3_search(long p_max, long k_max, int workers = 0);

/// Two-step version: for each top-step solution derives the first cover
/// degree k1 = (k(p+1)-1)/(k(p-1)-1) and rejects it by integrality or by
/// gcd(k1, p) != 1. Verdict: Impossible.
Certificate threefold_cy_search(long p_max, long k_max, int workers = 0);

/// The surface input a trivial-canonical three-stage tower would need:
/// (p,k) in {(2,3),(3,2)}, D = kD' ample, K ~ D'. Replays the would-be step
/// on a synthetic surface and certifies the canonical class comes out zero.
/// Verdict: ConditionallyPossible.
Certificate required_surface_conditions();

/// Frobenius-degree covers k = p^l r: solves p^l r - p^(l-1) r - 2 = 0 over
/// the grid, derives the K-condition for each solution, and contradicts the
/// induced base-curve relation (K1 = (7/2) D1' against p D1, and 4 D1'
/// against 9 D1'). The (2,4) branch records the elementwise and the derived
/// bound readings side by side. Verdict: Impossible.
Certificate construction_ii_search(long p_max, long l_max, long r_max, int workers = 0);

struct CorollaryRun {
  std::vector<Certificate> certificates;
  bool all_expected = false;
  std::vector<std::string> mismatches;
};

/// Runs all four searches and checks verdicts and solution sets against the
/// expected outcome for the given bounds.
CorollaryRun verify_corollaries(const SearchBounds& bounds = {}, int workers = 0);

}  // namespace tango
