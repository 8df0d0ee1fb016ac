#include "gphs/cover.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>

#include "gphs/gauss.hpp"
#include "gphs/parallel.hpp"
#include "gphs/rng.hpp"

namespace gphs {

std::string hypothesis_to_text(const Hypothesis& h) {
  char buf[40];
  auto line = [&](const Halfspace& hs) {
    std::string s;
    for (Eigen::Index i = 0; i < hs.w.size(); ++i) {
      std::snprintf(buf, sizeof(buf), "%.17g ", hs.w[i]);
      s += buf;
    }
    std::snprintf(buf, sizeof(buf), "%.17g\n", hs.t);
    s += buf;
    return s;
  };
  if (std::holds_alternative<Halfspace>(h)) return line(std::get<Halfspace>(h));
  const auto& b = std::get<BooleanHypothesis>(h);
  std::string s = "boolean " + std::to_string(b.parts.size()) + "\n";
  for (const auto& part : b.parts) s += line(part);
  for (auto v : b.table) s += v > 0 ? '+' : '-';
  s += '\n';
  return s;
}

namespace {

constexpr unsigned kPrimes[] = {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53};

double radical_inverse(unsigned base, std::uint64_t i) {
  double f = 1.0, r = 0.0;
  while (i) {
    f /= base;
    r += f * static_cast<double>(i % base);
    i /= base;
  }
  return r;
}

// greedy farthest-point selection until the candidate set is covered at
// radius delta; returns selected candidate rows
std::vector<Eigen::VectorXd> farthest_point_net(const Eigen::MatrixXd& cand, double delta,
                                                long long max_points) {
  const Eigen::Index nc = cand.rows();
  std::vector<double> mindist2(static_cast<std::size_t>(nc), std::numeric_limits<double>::infinity());
  std::vector<Eigen::VectorXd> net;
  Eigen::Index pick = 0;
  const double delta2 = delta * delta;
  for (;;) {
    net.push_back(cand.row(pick));
    if (static_cast<long long>(net.size()) > max_points)
      throw CoverBudgetError("sphere net exceeds the cover budget");
    double worst = 0.0;
    Eigen::Index next = -1;
    for (Eigen::Index i = 0; i < nc; ++i) {
      double d2 = (cand.row(i) - cand.row(pick)).squaredNorm();
      if (d2 < mindist2[static_cast<std::size_t>(i)]) mindist2[static_cast<std::size_t>(i)] = d2;
      if (mindist2[static_cast<std::size_t>(i)] > worst) {
        worst = mindist2[static_cast<std::size_t>(i)];
        next = i;
      }
    }
    if (worst <= delta2 || next < 0) break;
    pick = next;
  }
  return net;
}

}  // namespace

Cover build_cover(const Subspace& v, double eps_cover, long long max_cover, std::uint64_t seed) {
  if (!(eps_cover > 0.0 && eps_cover < 0.5)) throw InputError("eps_cover must be in (0, 1/2)");
  if (max_cover < 2) throw InputError("max_cover must allow at least the constants");
  const int r = v.dim();
  const int d = v.ambient_dim();
  if (r > 0) {
    if ((v.basis.transpose() * v.basis - Eigen::MatrixXd::Identity(r, r)).cwiseAbs().maxCoeff() >
        1e-10)
      throw InputError("subspace basis is not orthonormal");
  }
  Cover cover;
  cover.eps_cover = eps_cover;
  if (r == 0) {
    cover.items.push_back(Halfspace::constant(d, +1));
    cover.items.push_back(Halfspace::constant(d, -1));
    return cover;
  }
  if (r > 16) throw CoverBudgetError("subspace dimension too large for enumeration");

  // candidate directions: seeded Halton points mapped through the normal
  // quantile and radially projected
  double nc_exact = 10.0 * std::pow(3.0 / eps_cover, r);
  if (nc_exact > 5e6) throw CoverBudgetError("candidate set too large for the cover budget");
  Eigen::MatrixXd cand;
  if (r == 1) {
    cand.resize(2, 1);
    cand << 1.0, -1.0;
  } else {
    const long long nc = static_cast<long long>(std::ceil(nc_exact));
    const std::uint64_t offset = seed % (1ull << 20);
    cand.resize(nc, r);
    Eigen::VectorXd g(r);
    for (long long i = 0; i < nc; ++i) {
      for (int a = 0; a < r; ++a)
        g[a] = normal_quantile(radical_inverse(kPrimes[a], offset + static_cast<std::uint64_t>(i) + 1));
      double nrm = g.norm();
      if (nrm < 1e-12) g[0] = nrm = 1.0;
      cand.row(i) = g / nrm;
    }
  }
  auto net = farthest_point_net(cand, eps_cover / 2.0, max_cover);

  cover.t_max = normal_quantile(1.0 - eps_cover / 4.0);
  const int steps = static_cast<int>(std::ceil(2.0 * cover.t_max / (eps_cover / 2.0)));
  cover.normal_count = static_cast<int>(net.size());
  cover.grid_count = steps + 1;
  const long long total = static_cast<long long>(cover.normal_count) * cover.grid_count + 2;
  if (total > max_cover)
    throw CoverBudgetError("cover of size " + std::to_string(total) + " exceeds budget " +
                           std::to_string(max_cover));
  cover.items.reserve(static_cast<std::size_t>(total));
  for (const auto& dir : net) {
    Eigen::VectorXd w = v.basis * dir;  // exact combination, stays in span(V)
    for (int j = 0; j <= steps; ++j) {
      Halfspace h;
      h.w = w;
      h.t = -cover.t_max + j * (2.0 * cover.t_max / steps);
      cover.items.push_back(std::move(h));
    }
  }
  cover.items.push_back(Halfspace::constant(d, +1));
  cover.items.push_back(Halfspace::constant(d, -1));
  return cover;
}

namespace {

bool grid_layout(const Cover& cover) {
  return cover.normal_count > 0 &&
         cover.items.size() ==
             static_cast<std::size_t>(cover.normal_count) * cover.grid_count + 2;
}

struct BestIdx {
  double error = std::numeric_limits<double>::infinity();
  long long index = -1;
  void absorb(double e, long long i) {
    if (e < error || (e == error && i < index)) {
      error = e;
      index = i;
    }
  }
  void absorb(const BestIdx& o) { absorb(o.error, o.index); }
};

}  // namespace

ErmResult erm_halfspace(const Cover& cover, const LabeledDataset& data, int threads) {
  if (cover.items.empty()) throw InputError("empty cover");
  const long long n = data.size();
  if (n < 1) throw InputError("empty dataset");
  const double invn = 1.0 / static_cast<double>(n);
  BestIdx best;
  if (grid_layout(cover)) {
    // shared normals: one projection pass, sorted thresholds after that
    const int normals = cover.normal_count, grid = cover.grid_count;
    std::vector<BestIdx> part(static_cast<std::size_t>((normals + 15) / 16));
    parallel_chunks(normals, 16, threads, [&](long long ci, long long b, long long e) {
      Eigen::VectorXd proj(n);
      std::vector<double> sorted(static_cast<std::size_t>(n));
      std::vector<int> pos_prefix(static_cast<std::size_t>(n) + 1);
      std::vector<std::pair<double, int>> order(static_cast<std::size_t>(n));
      BestIdx local;
      for (long long nid = b; nid < e; ++nid) {
        const Halfspace& h0 = cover.items[static_cast<std::size_t>(nid) * grid];
        proj.noalias() = data.x * h0.w;
        for (long long i = 0; i < n; ++i)
          order[static_cast<std::size_t>(i)] = {proj[i], data.y[static_cast<std::size_t>(i)] > 0};
        std::sort(order.begin(), order.end());
        pos_prefix[0] = 0;
        for (long long i = 0; i < n; ++i) {
          sorted[static_cast<std::size_t>(i)] = order[static_cast<std::size_t>(i)].first;
          pos_prefix[static_cast<std::size_t>(i) + 1] =
              pos_prefix[static_cast<std::size_t>(i)] + order[static_cast<std::size_t>(i)].second;
        }
        const int total_pos = pos_prefix[static_cast<std::size_t>(n)];
        for (int j = 0; j < grid; ++j) {
          const long long item = nid * grid + j;
          const double t = cover.items[static_cast<std::size_t>(item)].t;
          // points with proj >= -t are classified +1 (ties to +1)
          long long cut = std::lower_bound(sorted.begin(), sorted.end(), -t) - sorted.begin();
          int pos_below = pos_prefix[static_cast<std::size_t>(cut)];
          long long neg_above = (n - cut) - (total_pos - pos_below);
          local.absorb((static_cast<double>(pos_below) + static_cast<double>(neg_above)) * invn,
                       item);
        }
      }
      part[static_cast<std::size_t>(ci)] = local;
    });
    for (const auto& p : part) best.absorb(p);
    long long base = static_cast<long long>(normals) * grid;
    long long npos = std::count_if(data.y.begin(), data.y.end(), [](std::int8_t v) { return v > 0; });
    best.absorb(static_cast<double>(n - npos) * invn, base);      // constant +1
    best.absorb(static_cast<double>(npos) * invn, base + 1);      // constant -1
  } else {
    Eigen::VectorXd xi;
    for (std::size_t it = 0; it < cover.items.size(); ++it) {
      long long wrong = 0;
      for (long long i = 0; i < n; ++i) {
        xi = data.x.row(i);
        if (cover.items[it].eval(xi) != data.y[static_cast<std::size_t>(i)]) ++wrong;
      }
      best.absorb(static_cast<double>(wrong) * invn, static_cast<long long>(it));
    }
  }
  return ErmResult{static_cast<int>(best.index), best.error};
}

CellErm cell_boolean_erm(const std::vector<Halfspace>& parts, const LabeledDataset& data) {
  const int k = static_cast<int>(parts.size());
  if (k < 1 || k > 16) throw InputError("cell ERM supports 1 <= K <= 16 parts");
  if (data.size() < 1) throw InputError("empty dataset");
  const std::size_t cells = std::size_t(1) << k;
  std::vector<long long> pos(cells, 0), neg(cells, 0);
  Eigen::VectorXd xi;
  for (long long i = 0; i < data.size(); ++i) {
    xi = data.x.row(i);
    int b = 0;
    for (int j = 0; j < k; ++j)
      if (parts[static_cast<std::size_t>(j)].eval(xi) > 0) b |= 1 << j;
    (data.y[static_cast<std::size_t>(i)] > 0 ? pos : neg)[static_cast<std::size_t>(b)] += 1;
  }
  CellErm out;
  out.table.resize(cells);
  long long wrong = 0;
  for (std::size_t b = 0; b < cells; ++b) {
    wrong += std::min(pos[b], neg[b]);
    out.table[b] = pos[b] >= neg[b] ? 1 : -1;
  }
  out.error = static_cast<double>(wrong) / static_cast<double>(data.size());
  return out;
}

namespace {

// per-item sign bits over the sample, packed 64 per word
std::vector<std::vector<std::uint64_t>> pack_item_bits(const Cover& cover,
                                                       const LabeledDataset& data, int threads) {
  const long long n = data.size();
  const std::size_t words = static_cast<std::size_t>((n + 63) / 64);
  std::vector<std::vector<std::uint64_t>> bits(cover.items.size(),
                                               std::vector<std::uint64_t>(words, 0));
  double approx_bytes = static_cast<double>(cover.items.size()) * static_cast<double>(words) * 8.0;
  if (approx_bytes > 2e9) throw CoverBudgetError("sign table for the cover would exceed memory budget");
  if (grid_layout(cover)) {
    const int grid = cover.grid_count;
    parallel_chunks(cover.normal_count, 8, threads, [&](long long, long long bnid, long long enid) {
      Eigen::VectorXd proj(n);
      for (long long nid = bnid; nid < enid; ++nid) {
        proj.noalias() = data.x * cover.items[static_cast<std::size_t>(nid) * grid].w;
        for (int j = 0; j < grid; ++j) {
          auto& row = bits[static_cast<std::size_t>(nid * grid + j)];
          const double t = cover.items[static_cast<std::size_t>(nid * grid + j)].t;
          for (long long i = 0; i < n; ++i)
            if (proj[i] + t >= 0.0) row[static_cast<std::size_t>(i >> 6)] |= 1ull << (i & 63);
        }
      }
    });
    std::size_t base = static_cast<std::size_t>(cover.normal_count) * grid;
    for (std::size_t w = 0; w < words; ++w) bits[base][w] = ~0ull;  // constant +1
  } else {
    Eigen::VectorXd xi;
    for (std::size_t it = 0; it < cover.items.size(); ++it) {
      for (long long i = 0; i < n; ++i) {
        xi = data.x.row(i);
        if (cover.items[it].eval(xi) > 0) bits[it][static_cast<std::size_t>(i >> 6)] |= 1ull << (i & 63);
      }
    }
  }
  return bits;
}

enum class SearchMode { erm_table, conjunction };

SearchResult tuple_search(const Cover& cover, int k, const LabeledDataset& data,
                          long long max_tuples, int threads, SearchMode mode) {
  if (k < 1 || k > 8) throw InputError("tuple search supports 1 <= K <= 8");
  if (max_tuples < 1) throw InputError("max_tuples must be >= 1");
  const long long h = static_cast<long long>(cover.items.size());
  if (h == 0) throw InputError("empty cover");
  const long long n = data.size();
  if (n < 1) throw InputError("empty dataset");
  double total_exact = std::pow(static_cast<double>(h), k);
  const bool truncated = total_exact > static_cast<double>(max_tuples);
  long long limit = truncated ? max_tuples : static_cast<long long>(total_exact + 0.5);

  auto bits = pack_item_bits(cover, data, threads);
  const std::size_t words = static_cast<std::size_t>((n + 63) / 64);
  std::vector<std::uint64_t> ypos(words, 0), valid(words, 0);
  for (long long i = 0; i < n; ++i) {
    valid[static_cast<std::size_t>(i >> 6)] |= 1ull << (i & 63);
    if (data.y[static_cast<std::size_t>(i)] > 0)
      ypos[static_cast<std::size_t>(i >> 6)] |= 1ull << (i & 63);
  }

  const int cells = 1 << k;
  std::vector<long long> strides(static_cast<std::size_t>(k));  // digit 0 slowest
  strides[static_cast<std::size_t>(k) - 1] = 1;
  for (int j = k - 2; j >= 0; --j)
    strides[static_cast<std::size_t>(j)] = strides[static_cast<std::size_t>(j) + 1] * h;

  const long long block = 2048;
  const long long nblocks = (limit + block - 1) / block;
  std::vector<BestIdx> part(static_cast<std::size_t>(nblocks));
  parallel_chunks(limit, block, threads, [&](long long ci, long long b, long long e) {
    BestIdx local;
    std::vector<const std::uint64_t*> rows(static_cast<std::size_t>(k));
    std::vector<long long> pos(static_cast<std::size_t>(cells)), tot(static_cast<std::size_t>(cells));
    for (long long tid = b; tid < e; ++tid) {
      for (int j = 0; j < k; ++j)
        rows[static_cast<std::size_t>(j)] =
            bits[static_cast<std::size_t>((tid / strides[static_cast<std::size_t>(j)]) % h)].data();
      std::fill(pos.begin(), pos.end(), 0);
      std::fill(tot.begin(), tot.end(), 0);
      for (std::size_t w = 0; w < words; ++w) {
        for (int c = 0; c < cells; ++c) {
          std::uint64_t m = valid[w];
          for (int j = 0; j < k; ++j) {
            std::uint64_t r = rows[static_cast<std::size_t>(j)][w];
            m &= (c >> j & 1) ? r : ~r;
          }
          if (!m) continue;
          tot[static_cast<std::size_t>(c)] += __builtin_popcountll(m);
          pos[static_cast<std::size_t>(c)] += __builtin_popcountll(m & ypos[w]);
        }
      }
      long long wrong = 0;
      if (mode == SearchMode::erm_table) {
        for (int c = 0; c < cells; ++c) {
          long long p = pos[static_cast<std::size_t>(c)];
          long long q = tot[static_cast<std::size_t>(c)] - p;
          wrong += std::min(p, q);
        }
      } else {
        for (int c = 0; c < cells - 1; ++c) wrong += pos[static_cast<std::size_t>(c)];
        wrong += tot[static_cast<std::size_t>(cells) - 1] - pos[static_cast<std::size_t>(cells) - 1];
      }
      local.absorb(static_cast<double>(wrong) / static_cast<double>(n), tid);
    }
    part[static_cast<std::size_t>(ci)] = local;
  });
  BestIdx best;
  for (const auto& p : part) best.absorb(p);

  SearchResult res;
  res.tuples_examined = limit;
  res.error = best.error;
  res.indices.resize(static_cast<std::size_t>(k));
  res.hypothesis.parts.resize(static_cast<std::size_t>(k));
  for (int j = 0; j < k; ++j) {
    int idx = static_cast<int>((best.index / strides[static_cast<std::size_t>(j)]) % h);
    res.indices[static_cast<std::size_t>(j)] = idx;
    res.hypothesis.parts[static_cast<std::size_t>(j)] = cover.items[static_cast<std::size_t>(idx)];
  }
  if (mode == SearchMode::erm_table)
    res.hypothesis.table = cell_boolean_erm(res.hypothesis.parts, data).table;
  else
    res.hypothesis.table = BooleanHypothesis::intersection_table(k);
  if (truncated)
    throw TupleBudgetError("tuple budget " + std::to_string(max_tuples) + " exhausted before " +
                               std::to_string(total_exact) + " tuples",
                           res);
  return res;
}

}  // namespace

SearchResult search_boolean(const Cover& cover, int k, const LabeledDataset& data,
                            long long max_tuples, int threads) {
  return tuple_search(cover, k, data, max_tuples, threads, SearchMode::erm_table);
}

SearchResult search_intersection(const Cover& cover, int k, const LabeledDataset& data,
                                 long long max_tuples, int threads) {
  return tuple_search(cover, k, data, max_tuples, threads, SearchMode::conjunction);
}

}  // namespace gphs
