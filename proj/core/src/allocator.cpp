// Copyright 2026 The phc Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "phc/allocator.hpp"

#include <algorithm>
#include <bit>
#include <limits>
#include <numeric>
#include <tuple>

#include "phc/costmodel.hpp"
#include "phc/errors.hpp"
#include "phc/pareto.hpp"

namespace phc {
namespace {

constexpr std::uint64_t kSat = std::numeric_limits<std::uint64_t>::max();

std::uint64_t sat_mul(std::uint64_t a, std::uint64_t b) {
  if (a == 0 || b == 0) return 0;
  if (a > kSat / b) return kSat;
  return a * b;
}

std::uint64_t permutations(std::uint64_t n, std::uint64_t k) {
  if (k > n) return 0;
  std::uint64_t r = 1;
  for (std::uint64_t i = 0; i < k; ++i) r = sat_mul(r, n - i);
  return r;
}

std::uint64_t combinations(std::uint64_t n, std::uint64_t k) {
  if (k > n) return 0;
  k = std::min(k, n - k);
  // exact while it fits; saturates otherwise
  long double r = 1.0L;
  for (std::uint64_t i = 1; i <= k; ++i) r = r * static_cast<long double>(n - k + i) / static_cast<long double>(i);
  if (r >= static_cast<long double>(kSat)) return kSat;
  return static_cast<std::uint64_t>(r + 0.5L);
}

// patches per second, the slower of link and accelerator
double effective_rate(const CloudInstance& node, const Application& app, std::uint64_t bytes_per_patch) {
  const double per_patch = static_cast<double>(bytes_per_patch) + app.output_bytes_per_patch;
  const double link = per_patch > 0.0 ? node.bandwidth / per_patch : std::numeric_limits<double>::infinity();
  return std::min(link, app.base_throughput * node.perf);
}

// Per (fragment, instance) timing and cost. Every path that scores a mapping
// reads these, so greedy and exhaustive results agree bit for bit.
struct CostTable {
  std::size_t frags = 0;
  std::size_t cols = 0;
  std::vector<double> time;
  std::vector<double> cost;

  double t(std::size_t k, std::size_t j) const { return time[k * cols + j]; }
  double c(std::size_t k, std::size_t j) const { return cost[k * cols + j]; }
};

CostTable build_table(const Application& app, const std::vector<Fragment>& fragments,
                      const std::vector<std::size_t>& pool) {
  CostTable tab;
  tab.frags = fragments.size();
  tab.cols = pool.size();
  tab.time.resize(tab.frags * tab.cols);
  tab.cost.resize(tab.frags * tab.cols);
  for (std::size_t k = 0; k < tab.frags; ++k) {
    for (std::size_t j = 0; j < tab.cols; ++j) {
      const CloudInstance& node = app.instances[pool[j]];
      const NodeTiming timing = node_completion(fragments[k], node, app);
      tab.time[k * tab.cols + j] = timing.t_total;
      tab.cost[k * tab.cols + j] = cost_line(timing, node, app.options.billing_granularity).cost;
    }
  }
  return tab;
}

// cols[k] is the pool column serving fragment k
std::pair<double, double> score(const CostTable& tab, const std::vector<std::size_t>& cols) {
  double time = 0.0;
  double cost = 0.0;
  for (std::size_t k = 0; k < cols.size(); ++k) {
    time = std::max(time, tab.t(k, cols[k]));
    cost += tab.c(k, cols[k]);
  }
  return {time, cost};
}

// Calls fn(cols) for every injective mapping, grouped by instance subset in
// lexicographic order; within a subset, permutations in lexicographic order.
template <class SubsetBegin, class Fn>
void for_each_injective(std::size_t n, std::size_t k, SubsetBegin&& on_subset, Fn&& fn) {
  std::vector<std::size_t> subset(k);
  std::iota(subset.begin(), subset.end(), std::size_t{0});
  std::vector<std::size_t> perm;
  while (true) {
    on_subset(subset);
    perm = subset;
    do {
      fn(perm);
    } while (std::next_permutation(perm.begin(), perm.end()));
    // next combination
    std::size_t i = k;
    while (i > 0 && subset[i - 1] == n - k + i - 1) --i;
    if (i == 0) break;
    ++subset[i - 1];
    for (std::size_t j = i; j < k; ++j) subset[j] = subset[j - 1] + 1;
  }
}

template <class Fn>
void for_each_subset(std::size_t n, std::size_t k, Fn&& fn) {
  std::vector<std::size_t> subset(k);
  std::iota(subset.begin(), subset.end(), std::size_t{0});
  while (true) {
    fn(subset);
    std::size_t i = k;
    while (i > 0 && subset[i - 1] == n - k + i - 1) --i;
    if (i == 0) break;
    ++subset[i - 1];
    for (std::size_t j = i; j < k; ++j) subset[j] = subset[j - 1] + 1;
  }
}

struct Candidate {
  double time;
  double cost;
  std::vector<std::size_t> cols;
};

// 2D front of `cands`, one entry per (time, cost, instance set), ordered by (time, cost, input order).
std::vector<Candidate> front_of(std::vector<Candidate>&& cands) {
  std::vector<std::array<double, 2>> pts;
  pts.reserve(cands.size());
  for (const auto& c : cands) pts.push_back({c.time, c.cost});
  const auto keep = pareto_filter_2d(pts);
  std::vector<Candidate> out;
  out.reserve(keep.size());
  for (std::size_t idx : keep) {
    bool dup = false;
    for (auto it = out.rbegin(); it != out.rend(); ++it) {
      if (it->time != cands[idx].time || it->cost != cands[idx].cost) break;
      auto a = it->cols;
      auto b = cands[idx].cols;
      std::sort(a.begin(), a.end());
      std::sort(b.begin(), b.end());
      if (a == b) {
        dup = true;
        break;
      }
    }
    if (!dup) out.push_back(std::move(cands[idx]));
  }
  return out;
}

using Bits = std::vector<std::uint64_t>;

Bits bits_of(const std::vector<std::size_t>& instances, std::size_t words) {
  Bits b(words, 0);
  for (std::size_t i : instances) b[i / 64] |= std::uint64_t{1} << (i % 64);
  return b;
}

struct Option {
  double time;
  double cost;
  Bits bits;
};

struct Point {
  std::array<double, 3> f;
  std::uint64_t rank;
};

// Collects feasible objective points, shrinking to the running 3D front when the buffer grows.
class FrontCollector {
 public:
  void add(const Point& p) {
    buf_.push_back(p);
    if (buf_.size() >= limit_) {
      compress();
      limit_ = std::max<std::size_t>(limit_, 2 * buf_.size());
    }
  }

  std::vector<Point> finish() {
    compress();
    std::sort(buf_.begin(), buf_.end(), [](const Point& a, const Point& b) {
      if (a.f != b.f) return a.f < b.f;
      return a.rank < b.rank;
    });
    std::vector<Point> out;
    for (const auto& p : buf_) {
      if (!out.empty() && out.back().f == p.f) continue;
      out.push_back(p);
    }
    return out;
  }

 private:
  void compress() {
    std::vector<std::array<double, 3>> pts;
    pts.reserve(buf_.size());
    for (const auto& p : buf_) pts.push_back(p.f);
    const auto keep = pareto_filter_3d(pts);
    std::vector<Point> next;
    next.reserve(keep.size());
    for (std::size_t i : keep) next.push_back(buf_[i]);
    buf_ = std::move(next);
  }

  std::vector<Point> buf_;
  std::size_t limit_ = 1u << 20;
};

bool feasible(std::size_t f1, double f2, double f3, const Constraints& c) {
  return f1 <= c.max_nodes && f2 <= c.budget && f3 > 0.0 && f3 <= c.time_threshold;
}

// Odometer over per-image options, last image fastest. Calls fn(rank, f1, f2, f3, idx).
template <class Fn>
std::uint64_t for_each_combination(const std::vector<std::vector<Option>>& options, std::size_t words, Fn&& fn) {
  const std::size_t m = options.size();
  for (const auto& o : options) {
    if (o.empty()) return 0;
  }
  std::vector<std::size_t> idx(m, 0);
  std::uint64_t rank = 0;
  Bits acc(words);
  while (true) {
    std::fill(acc.begin(), acc.end(), 0);
    double f2 = 0.0;
    double f3 = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
      const Option& o = options[i][idx[i]];
      for (std::size_t w = 0; w < words; ++w) acc[w] |= o.bits[w];
      f2 += o.cost;
      f3 = std::max(f3, o.time);
    }
    std::size_t f1 = 0;
    for (auto w : acc) f1 += static_cast<std::size_t>(std::popcount(w));
    fn(rank, f1, f2, f3, idx);
    ++rank;
    std::size_t i = m;
    while (i > 0) {
      if (++idx[i - 1] < options[i - 1].size()) break;
      idx[i - 1] = 0;
      --i;
    }
    if (i == 0) break;
  }
  return rank;
}

std::vector<std::size_t> decode_rank(std::uint64_t rank, const std::vector<std::size_t>& radix) {
  std::vector<std::size_t> idx(radix.size());
  for (std::size_t i = radix.size(); i-- > 0;) {
    idx[i] = static_cast<std::size_t>(rank % radix[i]);
    rank /= radix[i];
  }
  return idx;
}

std::size_t word_count(const Application& app) { return std::max<std::size_t>(1, (app.instances.size() + 63) / 64); }

void check_inputs(const Application& app, const ImageFragments& fragments) {
  if (fragments.size() != app.images.size()) {
    throw Error(Errc::length_mismatch, "fragment lists do not match the number of images");
  }
}

// Rank order used when a front has to shrink to respect combo_cap.
std::vector<std::size_t> prune_priority(const std::vector<ImageAssignment>& front) {
  std::vector<std::size_t> order;
  if (front.empty()) return order;
  std::vector<bool> taken(front.size(), false);
  auto take = [&](std::size_t i) {
    if (!taken[i]) {
      taken[i] = true;
      order.push_back(i);
    }
  };
  std::size_t cheapest = 0;
  std::size_t fastest = 0;
  for (std::size_t i = 1; i < front.size(); ++i) {
    if (front[i].cost < front[cheapest].cost) cheapest = i;
    if (front[i].time < front[fastest].time) fastest = i;
  }
  take(cheapest);
  take(fastest);
  std::vector<std::size_t> rest(front.size());
  std::iota(rest.begin(), rest.end(), std::size_t{0});
  std::stable_sort(rest.begin(), rest.end(), [&](std::size_t a, std::size_t b) {
    return front[a].cost * front[a].time < front[b].cost * front[b].time;
  });
  for (std::size_t i : rest) take(i);
  return order;
}

std::vector<std::vector<ImageAssignment>> cap_fronts(const std::vector<std::vector<ImageAssignment>>& fronts,
                                                     std::size_t combo_cap) {
  std::vector<std::size_t> keep(fronts.size());
  std::uint64_t product = 1;
  for (std::size_t i = 0; i < fronts.size(); ++i) {
    keep[i] = fronts[i].size();
    product = sat_mul(product, keep[i]);
  }
  if (product <= combo_cap) return fronts;
  while (true) {
    product = 1;
    for (auto k : keep) product = sat_mul(product, k);
    if (product <= combo_cap) break;
    std::size_t widest = 0;
    for (std::size_t i = 1; i < keep.size(); ++i) {
      if (keep[i] > keep[widest]) widest = i;
    }
    if (keep[widest] <= 1) break;
    --keep[widest];
  }
  std::vector<std::vector<ImageAssignment>> out(fronts.size());
  for (std::size_t i = 0; i < fronts.size(); ++i) {
    auto order = prune_priority(fronts[i]);
    order.resize(keep[i]);
    std::sort(order.begin(), order.end());
    for (std::size_t j : order) out[i].push_back(fronts[i][j]);
  }
  return out;
}

std::vector<std::vector<Option>> to_options(const std::vector<std::vector<ImageAssignment>>& fronts,
                                            std::size_t words) {
  std::vector<std::vector<Option>> options(fronts.size());
  for (std::size_t i = 0; i < fronts.size(); ++i) {
    for (const auto& a : fronts[i]) options[i].push_back({a.time, a.cost, bits_of(a.instance_of, words)});
  }
  return options;
}

std::size_t max_instance(const std::vector<std::vector<ImageAssignment>>& fronts) {
  std::size_t hi = 0;
  for (const auto& f : fronts) {
    for (const auto& a : f) {
      for (auto j : a.instance_of) hi = std::max(hi, j + 1);
    }
  }
  return hi;
}

AllocationSolution materialize(const std::vector<std::vector<ImageAssignment>>& fronts,
                               const std::vector<std::size_t>& idx, const Point& p) {
  AllocationSolution s;
  s.f1 = static_cast<std::size_t>(p.f[0]);
  s.f2 = p.f[1];
  s.f3 = p.f[2];
  for (std::size_t i = 0; i < fronts.size(); ++i) s.assignments.push_back(fronts[i][idx[i]]);
  return s;
}

// Shared tail of the greedy and exhaustive paths.
AllocationOutcome front_from_options(const std::vector<std::vector<ImageAssignment>>& fronts, const Constraints& c,
                                     std::size_t words, AllocationStats stats) {
  const auto options = to_options(fronts, words);
  std::vector<std::size_t> radix;
  for (const auto& f : fronts) radix.push_back(f.size());
  FrontCollector collector;
  std::uint64_t n_feasible = 0;
  stats.combinations_evaluated =
      for_each_combination(options, words, [&](std::uint64_t rank, std::size_t f1, double f2, double f3, const auto&) {
        if (!feasible(f1, f2, f3, c)) return;
        ++n_feasible;
        collector.add({{static_cast<double>(f1), f2, f3}, rank});
      });
  stats.feasible = n_feasible;
  AllocationOutcome out;
  for (const auto& p : collector.finish()) out.front.solutions.push_back(materialize(fronts, decode_rank(p.rank, radix), p));
  out.feasible = !out.front.solutions.empty();
  out.stats = std::move(stats);
  return out;
}

}  // namespace

std::vector<std::size_t> candidate_pool(const Application& app, std::size_t image) {
  std::vector<std::size_t> pool = app.pool_of(image);
  const std::size_t cap = app.options.pool_cap;
  if (cap == 0 || pool.size() <= cap) return pool;
  const std::uint64_t bpp = app.images[image].spec.bytes_per_patch();
  std::vector<double> rate(app.instances.size(), 0.0);
  for (std::size_t j : pool) rate[j] = effective_rate(app.instances[j], app, bpp);

  std::vector<std::size_t> by_rate = pool;
  std::stable_sort(by_rate.begin(), by_rate.end(), [&](std::size_t a, std::size_t b) { return rate[a] > rate[b]; });
  const std::size_t fast = (cap + 1) / 2;
  std::vector<std::size_t> chosen(by_rate.begin(), by_rate.begin() + static_cast<std::ptrdiff_t>(fast));
  std::vector<std::size_t> rest(by_rate.begin() + static_cast<std::ptrdiff_t>(fast), by_rate.end());
  std::stable_sort(rest.begin(), rest.end(), [&](std::size_t a, std::size_t b) {
    if (app.instances[a].price != app.instances[b].price) return app.instances[a].price < app.instances[b].price;
    return rate[a] > rate[b];
  });
  for (std::size_t i = 0; chosen.size() < cap && i < rest.size(); ++i) chosen.push_back(rest[i]);
  std::sort(chosen.begin(), chosen.end());
  return chosen;
}

std::vector<ImageAssignment> pf_2d_per_image(const Application& app, std::size_t image,
                                             const std::vector<Fragment>& fragments, bool prune) {
  const std::string& image_id = app.images.at(image).image_id;
  const std::size_t k = fragments.size();
  if (k == 0) return {ImageAssignment{image_id, {}, 0.0, 0.0}};
  const std::vector<std::size_t> pool = candidate_pool(app, image);
  const std::size_t n = pool.size();
  if (n < k) {
    throw Error(Errc::pool_too_small, "image '" + image_id + "' needs " + std::to_string(k) + " instances, pool has " +
                                          std::to_string(n));
  }
  const Constraints& c = app.constraints;
  if (prune && k > c.max_nodes) return {};

  const CostTable tab = build_table(app, fragments, pool);
  auto admissible = [&](double t, double cost) { return !prune || (t <= c.time_threshold && cost <= c.budget); };

  std::vector<Candidate> all;
  if (permutations(n, k) <= app.options.mapping_cap) {
    std::vector<Candidate> local;
    auto flush = [&] {
      if (local.empty()) return;
      for (auto& cand : front_of(std::move(local))) all.push_back(std::move(cand));
      local.clear();
    };
    for_each_injective(
        n, k, [&](const std::vector<std::size_t>&) { flush(); },
        [&](const std::vector<std::size_t>& cols) {
          const auto [t, cost] = score(tab, cols);
          if (admissible(t, cost)) local.push_back({t, cost, cols});
        });
    flush();
  } else {
    if (combinations(n, k) > app.options.mapping_cap) {
      throw Error(Errc::search_space_too_large, "image '" + image_id + "' has too many instance subsets");
    }
    const std::uint64_t bpp = app.images[image].spec.bytes_per_patch();
    std::vector<std::size_t> frag_order(k);
    std::iota(frag_order.begin(), frag_order.end(), std::size_t{0});
    std::stable_sort(frag_order.begin(), frag_order.end(), [&](std::size_t a, std::size_t b) {
      return fragments[a].patch_count() > fragments[b].patch_count();
    });
    std::vector<double> rate(n);
    for (std::size_t j = 0; j < n; ++j) rate[j] = effective_rate(app.instances[pool[j]], app, bpp);
    std::vector<Candidate> local;
    for_each_subset(n, k, [&](const std::vector<std::size_t>& subset) {
      std::vector<std::size_t> inst = subset;
      std::stable_sort(inst.begin(), inst.end(), [&](std::size_t a, std::size_t b) { return rate[a] > rate[b]; });
      std::vector<std::size_t> cols(k);
      for (std::size_t r = 0; r < k; ++r) cols[frag_order[r]] = inst[r];
      const auto [t, cost] = score(tab, cols);
      if (admissible(t, cost)) local.push_back({t, cost, std::move(cols)});
    });
    all = std::move(local);
  }

  std::vector<ImageAssignment> out;
  for (auto& cand : front_of(std::move(all))) {
    ImageAssignment a{image_id, {}, cand.time, cand.cost};
    for (std::size_t col : cand.cols) a.instance_of.push_back(pool[col]);
    out.push_back(std::move(a));
  }
  return out;
}

std::vector<AllocationSolution> compose_and_filter(const std::vector<std::vector<ImageAssignment>>& per_image_fronts,
                                                   const Constraints& constraints, std::size_t combo_cap) {
  const auto fronts = cap_fronts(per_image_fronts, combo_cap);
  const std::size_t words = std::max<std::size_t>(1, (max_instance(fronts) + 63) / 64);
  const auto options = to_options(fronts, words);
  std::vector<AllocationSolution> out;
  for_each_combination(options, words,
                       [&](std::uint64_t, std::size_t f1, double f2, double f3, const std::vector<std::size_t>& idx) {
                         if (!feasible(f1, f2, f3, constraints)) return;
                         out.push_back(materialize(fronts, idx, {{static_cast<double>(f1), f2, f3}, 0}));
                       });
  return out;
}

AllocationOutcome allocate_outcome(const Application& app, const ImageFragments& fragments) {
  check_inputs(app, fragments);
  AllocationStats stats;
  std::vector<std::vector<ImageAssignment>> fronts;
  std::uint64_t total = 1;
  for (std::size_t i = 0; i < app.images.size(); ++i) {
    fronts.push_back(pf_2d_per_image(app, i, fragments[i], true));
    const std::size_t n = candidate_pool(app, i).size();
    stats.candidates_per_image.push_back(n);
    stats.front_size_per_image.push_back(fronts.back().size());
    stats.exhaustive_per_image.push_back(permutations(n, fragments[i].size()) <= app.options.mapping_cap);
    total = sat_mul(total, fronts.back().size());
  }
  stats.combinations_total = total;
  if (total == 0) {
    AllocationOutcome out;
    out.stats = std::move(stats);
    return out;
  }
  return front_from_options(cap_fronts(fronts, app.options.combo_cap), app.constraints, word_count(app),
                            std::move(stats));
}

ParetoFront allocate(const Application& app, const ImageFragments& fragments) {
  AllocationOutcome out = allocate_outcome(app, fragments);
  if (!out.feasible) throw Error(Errc::infeasible_scenario, "no allocation satisfies the constraints");
  return std::move(out.front);
}

AllocationOutcome brute_force_outcome(const Application& app, const ImageFragments& fragments,
                                      std::uint64_t max_space) {
  check_inputs(app, fragments);
  std::uint64_t space = 1;
  for (std::size_t i = 0; i < app.images.size(); ++i) {
    space = sat_mul(space, std::max<std::uint64_t>(1, permutations(app.pool_of(i).size(), fragments[i].size())));
  }
  if (space > max_space) {
    throw Error(Errc::search_space_too_large,
                "exhaustive search over " + std::to_string(space) + " mappings exceeds the limit");
  }
  AllocationStats stats;
  std::vector<std::vector<ImageAssignment>> all(app.images.size());
  for (std::size_t i = 0; i < app.images.size(); ++i) {
    const auto& frags = fragments[i];
    const std::string& image_id = app.images[i].image_id;
    const auto pool = app.pool_of(i);
    stats.candidates_per_image.push_back(pool.size());
    stats.exhaustive_per_image.push_back(true);
    if (frags.empty()) {
      all[i].push_back({image_id, {}, 0.0, 0.0});
    } else if (pool.size() >= frags.size()) {
      const CostTable tab = build_table(app, frags, pool);
      for_each_injective(
          pool.size(), frags.size(), [](const std::vector<std::size_t>&) {},
          [&](const std::vector<std::size_t>& cols) {
            const auto [t, cost] = score(tab, cols);
            ImageAssignment a{image_id, {}, t, cost};
            for (std::size_t col : cols) a.instance_of.push_back(pool[col]);
            all[i].push_back(std::move(a));
          });
    }
    stats.front_size_per_image.push_back(all[i].size());
  }
  stats.combinations_total = space;
  return front_from_options(all, app.constraints, word_count(app), std::move(stats));
}

ParetoFront brute_force_front(const Application& app, const ImageFragments& fragments, std::uint64_t max_space) {
  return brute_force_outcome(app, fragments, max_space).front;
}

const AllocationSolution& representative(const ParetoFront& front) {
  if (front.solutions.empty()) throw Error(Errc::infeasible_scenario, "empty front has no representative");
  const AllocationSolution* best = &front.solutions.front();
  for (const auto& s : front.solutions) {
    if (std::tie(s.f2, s.f3, s.f1) < std::tie(best->f2, best->f3, best->f1)) best = &s;
  }
  return *best;
}

bool is_feasible(const AllocationSolution& s, const Constraints& c) { return feasible(s.f1, s.f2, s.f3, c); }

}  // namespace phc
