#pragma once

// Seeded random generators shared by the property-style test suites.

#include <random>
#include <string>
#include <vector>

#include "setkr/value.hpp"

namespace setkr::testing {

using Rng = std::mt19937_64;

inline std::size_t pick(Rng& rng, std::size_t n) {
  return std::uniform_int_distribution<std::size_t>(0, n - 1)(rng);
}

inline bool chance(Rng& rng, double p) {
  return std::uniform_real_distribution<double>(0.0, 1.0)(rng) < p;
}

// Random value over a small atom basis with bounded nesting depth.
inline Value random_value(Rng& rng, std::size_t max_depth,
                          const std::vector<std::string>& atoms = {"a", "b",
                                                                   "c"}) {
  if (max_depth == 0 || chance(rng, 0.4)) {
    return Value::atom(atoms[pick(rng, atoms.size())]);
  }
  if (chance(rng, 0.25)) {
    std::vector<Value> items;
    const std::size_t n = 2 + pick(rng, 2);
    for (std::size_t i = 0; i < n; ++i) {
      items.push_back(random_value(rng, max_depth - 1, atoms));
    }
    return Value::tuple(std::move(items));
  }
  std::vector<Value> elems;
  const std::size_t n = pick(rng, 4);
  for (std::size_t i = 0; i < n; ++i) {
    elems.push_back(random_value(rng, max_depth - 1, atoms));
  }
  return Value::set(std::move(elems));
}

// Every value of depth at most `depth` over the given atoms, where set
// elements and tuple items come from the previous level. Tuples are fixed
// at length two to keep the space small.
inline std::vector<Value> value_universe(const std::vector<std::string>& atoms,
                                         std::size_t depth,
                                         std::size_t cap = 400) {
  std::vector<Value> level;
  for (const auto& a : atoms) level.push_back(Value::atom(a));
  std::vector<Value> all = level;
  for (std::size_t d = 0; d < depth && all.size() < cap; ++d) {
    std::vector<Value> next;
    // sets over the previous closure
    const std::size_t n = all.size();
    if (n <= 12) {
      for (std::size_t mask = 0; mask < (std::size_t(1) << n); ++mask) {
        std::vector<Value> elems;
        for (std::size_t i = 0; i < n; ++i) {
          if (mask & (std::size_t(1) << i)) elems.push_back(all[i]);
        }
        next.push_back(Value::set(std::move(elems)));
      }
    }
    for (std::size_t i = 0; i < n && next.size() < cap; ++i) {
      for (std::size_t j = 0; j < n && next.size() < cap; ++j) {
        next.push_back(Value::tuple({all[i], all[j]}));
      }
    }
    for (auto& v : next) {
      all.push_back(std::move(v));
      if (all.size() >= cap) break;
    }
    std::sort(all.begin(), all.end());
    all.erase(std::unique(all.begin(), all.end()), all.end());
  }
  return all;
}

}  // namespace setkr::testing
