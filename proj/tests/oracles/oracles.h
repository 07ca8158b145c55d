#pragma once

// Test-only reference implementations. Nothing here calls into the library's
// search, similarity, counting or metric code.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <map>
#include <set>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

namespace oracle {

using Vec = std::vector<double>;

inline double cosine(const Vec& a, const Vec& b) {
  long double dot = 0, na = 0, nb = 0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    dot += static_cast<long double>(a[i]) * b[i];
    na += static_cast<long double>(a[i]) * a[i];
    nb += static_cast<long double>(b[i]) * b[i];
  }
  if (na == 0 || nb == 0) return -1.0;
  return static_cast<double>(dot / std::sqrt(na * nb));
}

struct Entry {
  std::string token;
  Vec vec;
};

// Sort every candidate by (similarity desc, token asc), filter, cut.
inline std::vector<std::pair<std::string, double>> exhaustive_top_k(
    const std::vector<Entry>& table, const Vec& query, std::size_t k, double threshold,
    const std::set<std::string>& exclude) {
  std::vector<std::pair<std::string, double>> all;
  for (const auto& e : table) all.emplace_back(e.token, cosine(query, e.vec));
  std::stable_sort(all.begin(), all.end(), [](const auto& a, const auto& b) {
    if (a.second != b.second) return a.second > b.second;
    return a.first < b.first;
  });
  std::vector<std::pair<std::string, double>> out;
  for (const auto& [t, s] : all) {
    if (out.size() == k) break;
    if (exclude.count(t) || s < threshold) continue;
    out.emplace_back(t, s);
  }
  return out;
}

struct SearchTrace {
  std::vector<std::string> keywords;
  std::vector<std::size_t> depths;
  std::set<std::pair<std::string, std::string>> edges;
  std::vector<Vec> context;
};

// Level-by-level simulation by exhaustive scanning: each pick is the single
// best remaining candidate, found with a linear max search.
inline SearchTrace simulate_bwgs(const std::vector<Entry>& table,
                                 const std::set<std::string>& candidates, const std::string& seed,
                                 double threshold, std::size_t max_depth, std::size_t k, double mix) {
  std::map<std::string, Vec> emb;
  for (const auto& e : table) emb[e.token] = e.vec;

  SearchTrace out;
  Vec context = emb.at(seed);
  out.context.push_back(context);
  std::set<std::string> seen{seed};
  std::vector<std::string> frontier{seed};

  auto better = [](double s, const std::string& t, double best_s, const std::string& best_t) {
    return s > best_s || (s == best_s && t < best_t);
  };

  for (std::size_t depth = 0; !frontier.empty(); ++depth) {
    std::vector<std::string> discovered;
    for (const auto& node : frontier) {
      out.keywords.push_back(node);
      out.depths.push_back(depth);
      if (depth == max_depth) continue;
      Vec q(context.size());
      for (std::size_t i = 0; i < q.size(); ++i) {
        q[i] = mix * context[i] + (1.0 - mix) * emb.at(node)[i];
      }
      for (std::size_t pick = 0; pick < k; ++pick) {
        std::string best;
        double best_s = -2.0;
        for (const auto& c : candidates) {
          if (seen.count(c) || !emb.count(c)) continue;
          const double s = cosine(q, emb.at(c));
          if (s < threshold) continue;
          if (best.empty() || better(s, c, best_s, best)) {
            best = c;
            best_s = s;
          }
        }
        if (best.empty()) break;
        seen.insert(best);
        discovered.push_back(best);
        out.edges.emplace(node, best);
      }
    }
    if (depth < max_depth) {
      std::vector<std::string> pool = discovered;
      std::vector<std::string> chosen;
      while (chosen.size() < k && !pool.empty()) {
        std::size_t bi = 0;
        for (std::size_t i = 1; i < pool.size(); ++i) {
          if (better(cosine(context, emb.at(pool[i])), pool[i], cosine(context, emb.at(pool[bi])),
                     pool[bi])) {
            bi = i;
          }
        }
        chosen.push_back(pool[bi]);
        pool.erase(pool.begin() + static_cast<std::ptrdiff_t>(bi));
      }
      Vec next = context;
      for (const auto& c : chosen) {
        for (std::size_t i = 0; i < next.size(); ++i) next[i] += emb.at(c)[i];
      }
      for (auto& x : next) x /= static_cast<double>(chosen.size() + 1);
      context = next;
      out.context.push_back(context);
    }
    frontier = discovered;
  }
  return out;
}

// Twelve tokens on the unit circle; "u000" sits at 0 degrees.
inline std::vector<Entry> unit_circle_fixture() {
  const std::vector<std::pair<std::string, double>> angles{
      {"u000", 0},  {"u008", 8},  {"u017", 17}, {"u029", 29}, {"u038", 38},  {"u055", 55},
      {"u067", 67}, {"u081", 81}, {"m012", -12}, {"m033", -33}, {"m061", -61}, {"u140", 140}};
  std::vector<Entry> out;
  for (const auto& [t, deg] : angles) {
    const double r = deg * 3.14159265358979323846 / 180.0;
    out.push_back({t, {std::cos(r), std::sin(r)}});
  }
  return out;
}

inline std::pair<std::unordered_map<std::string, std::size_t>,
                 std::unordered_map<std::string, std::size_t>>
count_tokens(const std::vector<std::vector<std::string>>& docs) {
  std::unordered_map<std::string, std::size_t> counts, df;
  for (const auto& d : docs) {
    for (const auto& t : d) counts[t] += 1;
    std::vector<std::string> uniq = d;
    std::sort(uniq.begin(), uniq.end());
    uniq.erase(std::unique(uniq.begin(), uniq.end()), uniq.end());
    for (const auto& t : uniq) df[t] += 1;
  }
  return {counts, df};
}

struct Counts {
  std::size_t tp = 0, fp = 0, fn = 0, tn = 0;
};

inline Counts confusion_loop(const std::vector<std::string>& ids, const std::set<std::string>& pred,
                             const std::set<std::string>& gold) {
  Counts c;
  for (const auto& id : ids) {
    const bool p = pred.count(id) > 0;
    const bool g = gold.count(id) > 0;
    if (p && g) ++c.tp;
    else if (p) ++c.fp;
    else if (g) ++c.fn;
    else ++c.tn;
  }
  return c;
}

// Central differences of f at x, one coordinate at a time.
inline std::vector<double> central_difference(const std::function<double(const std::vector<double>&)>& f,
                                              std::vector<double> x, double h) {
  std::vector<double> g(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double orig = x[i];
    x[i] = orig + h;
    const double up = f(x);
    x[i] = orig - h;
    const double down = f(x);
    x[i] = orig;
    g[i] = (up - down) / (2.0 * h);
  }
  return g;
}

}  // namespace oracle
