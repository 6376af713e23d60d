#include "nmrq/clusters.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <set>

namespace nmrq {

namespace {
int find_root(std::vector<int>& parent, int x) {
  while (parent[static_cast<std::size_t>(x)] != x) {
    parent[static_cast<std::size_t>(x)] =
        parent[static_cast<std::size_t>(parent[static_cast<std::size_t>(x)])];
    x = parent[static_cast<std::size_t>(x)];
  }
  return x;
}
}  // namespace

std::vector<Cluster> decompose_clusters(const SpinHamiltonian& h,
                                        const std::vector<SpinSite>& sites) {
  int n = h.n_sites;
  std::vector<int> parent(static_cast<std::size_t>(n));
  std::iota(parent.begin(), parent.end(), 0);
  for (const PauliTerm& t : h.terms) {
    for (std::size_t i = 1; i < t.factors.size(); ++i) {
      int ra = find_root(parent, t.factors[0].site);
      int rb = find_root(parent, t.factors[i].site);
      if (ra != rb) parent[static_cast<std::size_t>(std::max(ra, rb))] = std::min(ra, rb);
    }
  }

  std::map<int, std::vector<int>> members;  // root -> ascending member sites
  for (int s = 0; s < n; ++s) members[find_root(parent, s)].push_back(s);

  std::vector<Cluster> clusters;
  for (const auto& [root, sites_in] : members) {
    (void)root;
    Cluster c;
    c.site_map = sites_in;
    c.h.n_sites = static_cast<int>(sites_in.size());
    std::map<int, int> to_local;
    for (int k = 0; k < c.h.n_sites; ++k)
      to_local[sites_in[static_cast<std::size_t>(k)]] = k;
    for (const PauliTerm& t : h.terms) {
      if (t.factors.empty() || !to_local.count(t.factors[0].site)) continue;
      PauliTerm local = t;
      for (PauliFactor& f : local.factors) f.site = to_local.at(f.site);
      c.h.terms.push_back(std::move(local));
    }
    canonicalize(c.h);
    if (!sites.empty())
      for (int s : sites_in)
        c.atom_map.push_back(sites[static_cast<std::size_t>(s)].atom);
    else
      c.atom_map = sites_in;
    clusters.push_back(std::move(c));
  }

  std::sort(clusters.begin(), clusters.end(), [](const Cluster& a, const Cluster& b) {
    if (a.size() != b.size()) return a.size() > b.size();
    return a.site_map.front() < b.site_map.front();
  });
  return clusters;
}

ClusterMetrics cluster_metrics(const SpinHamiltonian& h) {
  ClusterMetrics m;
  m.size = h.n_sites;
  m.term_count = h.term_count();
  m.alpha = h.alpha();
  m.f_max = h.f_max();
  std::set<std::pair<int, int>> pairs;
  for (const PauliTerm& t : h.terms) {
    if (t.factors.size() < 2) continue;
    for (std::size_t i = 0; i < t.factors.size(); ++i)
      for (std::size_t j = i + 1; j < t.factors.size(); ++j)
        pairs.insert({t.factors[i].site, t.factors[j].site});
  }
  m.coupled_pairs = static_cast<int>(pairs.size());
  for (const auto& [a, b] : pairs)
    m.max_register_distance = std::max(m.max_register_distance, b - a);
  return m;
}

std::vector<std::string> hardness_flags(int n_spins) {
  std::vector<std::string> flags;
  for (int t : {16, 20, 32})
    if (n_spins >= t) flags.push_back("N>=" + std::to_string(t));
  return flags;
}

}  // namespace nmrq
