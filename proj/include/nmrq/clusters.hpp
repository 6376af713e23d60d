#pragma once

#include <string>
#include <vector>

#include "nmrq/hamiltonian.hpp"

namespace nmrq {

// A connected component of the coupling graph, renumbered to contiguous
// sites. site_map[k] is the parent-register site index of cluster site k
// (ascending); atom_map carries the originating atom indices when sites
// were provided.
struct Cluster {
  SpinHamiltonian h;
  std::vector<int> site_map;
  std::vector<int> atom_map;
  int size() const { return h.n_sites; }
};

struct ClusterMetrics {
  int size = 0;
  std::size_t term_count = 0;
  int coupled_pairs = 0;           // distinct 2+-site term supports
  double alpha = 0.0;
  double f_max = 0.0;
  int max_register_distance = 0;   // max |i-j| over coupled pairs, counted once
};

// Split a Hamiltonian into connected components (sites joined when they
// share a term). Singleton sites become size-1 clusters with no terms.
// Deterministic order: size descending, then smallest original site index.
std::vector<Cluster> decompose_clusters(const SpinHamiltonian& h,
                                        const std::vector<SpinSite>& sites = {});

ClusterMetrics cluster_metrics(const SpinHamiltonian& h);

// Hardness flags for a cluster size (thresholds 16, 20, 32), e.g. "N>=20".
std::vector<std::string> hardness_flags(int n_spins);

}  // namespace nmrq
