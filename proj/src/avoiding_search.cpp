// SPDX-License-Identifier: Apache-2.0
#include <algorithm>
#include <random>
#include <set>

#include "lllkit/errors.hpp"
#include "lllkit/solver.hpp"
#include "lllkit/tiles.hpp"

namespace lllkit {

namespace {

struct Literal {
  std::uint32_t v;
  Color c;
};

class NogoodSearch {
 public:
  NogoodSearch(std::size_t n, Color k) : n_(n), k_(k), occ_(n * k), block_(n * k, 0),
                                         avail_(n, k), assign_(n, kNoColor) {}

  // Returns false if the nogood can never be avoided (empty).
  bool add(std::vector<Literal> lits) {
    if (lits.empty()) return false;
    const auto id = static_cast<std::uint32_t>(start_.size());
    start_.push_back(static_cast<std::uint32_t>(lits_.size()));
    for (const auto& l : lits) {
      lits_.push_back(l);
      occ_[l.v * k_ + l.c].push_back(id);
    }
    len_.push_back(static_cast<std::uint32_t>(lits.size()));
    sat_.push_back(0);
    dead_.push_back(0);
    if (lits.size() == 1) block(lits[0].v, lits[0].c, false);
    return true;
  }

  std::size_t size() const { return len_.size(); }

  SearchStatus run(const SearchLimits& limits, std::uint64_t& nodes) {
    const auto deadline = std::chrono::steady_clock::now() + limits.time_limit;
    for (std::uint32_t v = 0; v < n_; ++v) {
      if (avail_[v] == 0) return SearchStatus::Unsat;
      queue_.insert({avail_[v], v});
    }
    struct Frame {
      std::uint32_t v;
      Color next;
      std::size_t trail;
    };
    std::vector<Frame> stack;
    bool need_pick = true;
    while (true) {
      if (need_pick) {
        if (queue_.empty()) return SearchStatus::Found;
        const auto [a, v] = *queue_.begin();
        (void)a;
        stack.push_back({v, 0, trail_.size()});
      }
      if (stack.empty()) return SearchStatus::Unsat;
      Frame& fr = stack.back();
      undo_to(fr.trail);
      bool placed = false;
      while (fr.next < k_) {
        const Color c = fr.next++;
        if (block_[fr.v * k_ + c] != 0) continue;
        if (++nodes >= limits.node_limit) return SearchStatus::Indeterminate;
        if ((nodes & 1023) == 0 && std::chrono::steady_clock::now() > deadline)
          return SearchStatus::Indeterminate;
        if (assign(fr.v, c)) {
          placed = true;
          break;
        }
        undo_to(fr.trail);
      }
      if (placed) {
        need_pick = true;
        continue;
      }
      undo_to(fr.trail);
      stack.pop_back();
      need_pick = false;
      if (stack.empty()) return SearchStatus::Unsat;
    }
  }

  const std::vector<Color>& assignment() const { return assign_; }

  // Tabu search over total colorings; the objective is the number of
  // violated nogoods. Only ever reports success.
  bool local_search(std::chrono::steady_clock::time_point deadline, std::uint64_t seed,
                    std::uint64_t& steps) {
    undo_to(0);
    std::mt19937_64 rng(seed);
    // Greedy start: each vertex takes a color closing the fewest nogoods
    // among the vertices colored before it.
    std::vector<Color> col(n_, kNoColor);
    for (std::uint32_t v = 0; v < n_; ++v) {
      std::uint64_t best = UINT64_MAX, ties = 0;
      for (Color c = 0; c < k_; ++c) {
        if (block_[v * k_ + c] != 0) continue;
        std::uint64_t closed = 0;
        for (auto id : occ_[v * k_ + c]) {
          bool all = true;
          for (std::uint32_t i = 0; i < len_[id] && all; ++i) {
            const auto& l = lits_[start_[id] + i];
            all = l.v == v || col[l.v] == l.c;
          }
          closed += all;
        }
        if (closed < best) {
          best = closed;
          col[v] = c;
          ties = 1;
        } else if (closed == best && rng() % ++ties == 0) {
          col[v] = c;
        }
      }
      if (best == UINT64_MAX) return false;
    }
    std::vector<std::uint32_t> score(n_ * k_, 0), sat(len_.size(), 0);
    std::vector<std::uint64_t> tabu(n_ * k_, 0);
    std::size_t total = 0;
    auto holds = [&](const Literal& l) { return col[l.v] == l.c; };
    auto touch = [&](std::uint32_t id, int sign) {
      for (std::uint32_t i = 0; i < len_[id]; ++i) {
        const auto& l = lits_[start_[id] + i];
        if (sat[id] - holds(l) + 1 == len_[id]) score[l.v * k_ + l.c] += sign;
      }
      if (sat[id] == len_[id]) total += sign;
    };
    for (std::uint32_t id = 0; id < len_.size(); ++id) {
      for (std::uint32_t i = 0; i < len_[id]; ++i) sat[id] += holds(lits_[start_[id] + i]);
      touch(id, 1);
    }
    std::vector<std::uint32_t> bad;
    std::vector<std::int64_t> where(n_, -1);
    auto refresh = [&](std::uint32_t v) {
      const bool is_bad = score[v * k_ + col[v]] != 0;
      if (is_bad && where[v] < 0) {
        where[v] = static_cast<std::int64_t>(bad.size());
        bad.push_back(v);
      } else if (!is_bad && where[v] >= 0) {
        const auto last = bad.back();
        bad[where[v]] = last;
        where[last] = where[v];
        bad.pop_back();
        where[v] = -1;
      }
    };
    for (std::uint32_t v = 0; v < n_; ++v) refresh(v);
    std::size_t best_total = total;
    std::vector<std::uint32_t> affected;
    for (std::uint64_t it = 1; total != 0; ++it) {
      ++steps;
      if ((it & 255) == 0 && std::chrono::steady_clock::now() > deadline) return false;
      std::uint32_t bv = 0;
      Color bc = 0;
      std::int64_t bd = INT64_MAX;
      std::uint64_t ties = 0;
      for (auto v : bad) {
        const auto cur = score[v * k_ + col[v]];
        for (Color c = 0; c < k_; ++c) {
          if (c == col[v] || block_[v * k_ + c] != 0) continue;
          const std::int64_t d = std::int64_t{score[v * k_ + c]} - cur;
          const bool aspire = static_cast<std::int64_t>(total) + d <
                              static_cast<std::int64_t>(best_total);
          if (tabu[v * k_ + c] >= it && !aspire) continue;
          if (d < bd) {
            bd = d;
            bv = v;
            bc = c;
            ties = 1;
          } else if (d == bd && rng() % ++ties == 0) {
            bv = v;
            bc = c;
          }
        }
      }
      if (bd == INT64_MAX) {
        bv = bad[rng() % bad.size()];
        std::vector<Color> ok;
        for (Color c = 0; c < k_; ++c)
          if (c != col[bv] && block_[bv * k_ + c] == 0) ok.push_back(c);
        if (ok.empty()) continue;
        bc = ok[rng() % ok.size()];
      }
      const Color old = col[bv];
      tabu[bv * k_ + old] = it + total * 6 / 10 + rng() % 10;
      affected.clear();
      for (Color c : {old, bc})
        for (auto id : occ_[bv * k_ + c]) {
          touch(id, -1);
          affected.push_back(id);
        }
      col[bv] = bc;
      for (auto id : occ_[bv * k_ + old]) --sat[id];
      for (auto id : occ_[bv * k_ + bc]) ++sat[id];
      for (auto id : affected) touch(id, 1);
      for (auto id : affected)
        for (std::uint32_t i = 0; i < len_[id]; ++i) refresh(lits_[start_[id] + i].v);
      refresh(bv);
      best_total = std::min(best_total, total);
    }
    assign_ = std::move(col);
    return true;
  }

  bool all_avoided() const {
    for (std::size_t id = 0; id < len_.size(); ++id) {
      bool hit = true;
      for (std::uint32_t i = 0; i < len_[id]; ++i) {
        const auto& l = lits_[start_[id] + i];
        hit = hit && assign_[l.v] == l.c;
      }
      if (hit) return false;
    }
    return true;
  }

 private:
  enum class Op : std::uint8_t { Assign, Sat, Dead, Block };
  struct Entry {
    Op op;
    std::uint32_t a;
  };

  // Returns false on a domain wipeout.
  bool block(std::uint32_t u, Color c, bool trailed) {
    if (trailed) trail_.push_back({Op::Block, u * k_ + c});
    if (block_[u * k_ + c]++ != 0) return true;
    if (trailed) queue_.erase({avail_[u], u});
    --avail_[u];
    if (trailed) queue_.insert({avail_[u], u});
    return avail_[u] != 0;
  }

  bool assign(std::uint32_t v, Color c) {
    queue_.erase({avail_[v], v});
    assign_[v] = c;
    trail_.push_back({Op::Assign, v});
    bool ok = true;
    for (Color c2 = 0; c2 < k_; ++c2) {
      if (c2 == c) continue;
      for (auto id : occ_[v * k_ + c2]) {
        ++dead_[id];
        trail_.push_back({Op::Dead, id});
      }
    }
    for (auto id : occ_[v * k_ + c]) {
      ++sat_[id];
      trail_.push_back({Op::Sat, id});
      if (dead_[id] != 0) continue;
      if (sat_[id] == len_[id]) {
        ok = false;
        continue;
      }
      if (sat_[id] + 1 != len_[id]) continue;
      for (std::uint32_t i = 0; i < len_[id]; ++i) {
        const auto& l = lits_[start_[id] + i];
        if (assign_[l.v] == kNoColor) {
          ok = block(l.v, l.c, true) && ok;
          break;
        }
      }
    }
    return ok;
  }

  void undo_to(std::size_t mark) {
    while (trail_.size() > mark) {
      const Entry e = trail_.back();
      trail_.pop_back();
      switch (e.op) {
        case Op::Assign:
          assign_[e.a] = kNoColor;
          queue_.insert({avail_[e.a], e.a});
          break;
        case Op::Sat:
          --sat_[e.a];
          break;
        case Op::Dead:
          --dead_[e.a];
          break;
        case Op::Block: {
          const std::uint32_t u = e.a / k_;
          if (--block_[e.a] == 0) {
            queue_.erase({avail_[u], u});
            ++avail_[u];
            queue_.insert({avail_[u], u});
          }
          break;
        }
      }
    }
  }

  std::size_t n_;
  Color k_;
  std::vector<Literal> lits_;
  std::vector<std::uint32_t> start_, len_, sat_, dead_;
  std::vector<std::vector<std::uint32_t>> occ_;
  std::vector<std::uint32_t> block_;
  std::vector<std::uint32_t> avail_;
  std::vector<Color> assign_;
  std::vector<Entry> trail_;
  std::set<std::pair<std::uint32_t, std::uint32_t>> queue_;
};

}  // namespace

AvoidingSearchResult find_avoiding_coloring(const Group& g, const SLabeledGraph& h,
                                            const PatternSet& ps, const FiniteSubset& s,
                                            const SearchLimits& limits) {
  if (ps.k < 1) throw InputError("k must be at least 1");
  for (const auto& p : ps.patterns) {
    validate_pattern(g, p, ps.k);
    if (!is_s_connected(g, p, s)) throw InputError("pattern is not S-connected");
  }
  AvoidingSearchResult res;
  const std::size_t n = h.vertex_count();
  NogoodSearch search(n, ps.k);

  // Patterns sharing a domain share their homomorphisms.
  std::vector<bool> done(ps.patterns.size(), false);
  bool trivially_unsat = false;
  for (std::size_t i = 0; i < ps.patterns.size() && !trivially_unsat; ++i) {
    if (done[i]) continue;
    std::vector<std::size_t> group;
    for (std::size_t j = i; j < ps.patterns.size(); ++j)
      if (!done[j] && ps.patterns[j].dom == ps.patterns[i].dom) {
        group.push_back(j);
        done[j] = true;
      }
    PatternMatcher matcher(g, ps.patterns[i].dom, s, h);
    std::vector<Literal> lits;
    matcher.for_each(nullptr, {}, [&](std::span<const std::uint32_t> phi) {
      for (auto j : group) {
        const auto& vals = ps.patterns[j].values;
        lits.clear();
        bool consistent = true;
        for (std::size_t t = 0; t < phi.size() && consistent; ++t) {
          auto it = std::find_if(lits.begin(), lits.end(),
                                 [&](const Literal& l) { return l.v == phi[t]; });
          if (it == lits.end())
            lits.push_back({phi[t], vals[t]});
          else
            consistent = it->c == vals[t];
        }
        if (!consistent) continue;
        if (search.size() >= limits.nogood_limit)
          throw BudgetExceeded("too many pattern occurrences");
        if (!search.add(lits)) {
          trivially_unsat = true;
          return false;
        }
      }
      return true;
    });
  }
  res.nogoods = search.size();
  if (trivially_unsat) {
    res.status = SearchStatus::Unsat;
    return res;
  }
  const auto start = std::chrono::steady_clock::now();
  SearchLimits exact = limits;
  if (limits.local_search) exact.time_limit = limits.time_limit / 4;
  res.status = search.run(exact, res.nodes);
  if (res.status == SearchStatus::Indeterminate && limits.local_search &&
      search.local_search(start + limits.time_limit, limits.seed, res.local_steps))
    res.status = SearchStatus::Found;
  if (res.status == SearchStatus::Found) {
    res.coloring = search.assignment();
    if (!search.all_avoided()) throw InvariantError("search returned a pattern occurrence");
  }
  return res;
}

AscendingColoring ascending_avoiding_coloring(
    const Group& g, const SLabeledGraph& h, const FiniteSubset& s,
    const std::function<PatternSet(Color)>& patterns, Color k_min, Color k_max,
    const SearchLimits& per_k) {
  AscendingColoring out;
  for (Color k = k_min; k <= k_max; ++k) {
    auto r = find_avoiding_coloring(g, h, patterns(k), s, per_k);
    out.attempts.emplace_back(k, r.status);
    if (r.status == SearchStatus::Found) {
      out.k = k;
      out.coloring = std::move(r.coloring);
      break;
    }
  }
  return out;
}

}  // namespace lllkit
