#include "setkr/value.hpp"

#include <algorithm>
#include <ostream>
#include <sstream>

#include "setkr/errors.hpp"

namespace setkr {

Limits& limits() {
  static Limits instance;
  return instance;
}

namespace {

std::size_t hash_mix(std::size_t seed, std::size_t v) {
  // Boost-style combine; good enough for containers and fast equality
  // rejection.
  return seed ^ (v + 0x9e3779b97f4a7c15ull + (seed << 6) + (seed >> 2));
}

std::size_t hash_string(const std::string& s) {
  return std::hash<std::string>{}(s);
}

}  // namespace

Value Value::finish(Node node) {
  std::size_t h = hash_mix(0, static_cast<std::size_t>(node.kind));
  std::uint32_t depth = 0;
  if (node.kind == Kind::Atom) {
    h = hash_mix(h, hash_string(node.name));
  } else {
    for (const Value& e : node.elems) {
      h = hash_mix(h, e.hash());
      depth = std::max(depth, static_cast<std::uint32_t>(e.depth()) + 1);
    }
    if (node.elems.empty()) depth = 1;
  }
  node.depth = depth;
  node.hash = h;
  if (depth > limits().max_depth) {
    throw SizeLimitExceeded("value nesting depth " + std::to_string(depth) +
                            " exceeds limit " +
                            std::to_string(limits().max_depth));
  }
  return Value(std::make_shared<const Node>(std::move(node)));
}

Value::Value() : node_(empty_set().node_) {}

Value Value::atom(std::string name) {
  Node n;
  n.kind = Kind::Atom;
  n.name = std::move(name);
  return finish(std::move(n));
}

Value Value::set(std::vector<Value> elements) {
  std::sort(elements.begin(), elements.end());
  elements.erase(std::unique(elements.begin(), elements.end()),
                 elements.end());
  if (elements.size() > limits().max_set_size) {
    throw SizeLimitExceeded("set of " + std::to_string(elements.size()) +
                            " elements exceeds limit " +
                            std::to_string(limits().max_set_size));
  }
  Node n;
  n.kind = Kind::Set;
  n.elems = std::move(elements);
  return finish(std::move(n));
}

Value Value::tuple(std::vector<Value> items) {
  if (items.size() < 2) {
    throw Error("tuple needs at least two items");
  }
  Node n;
  n.kind = Kind::Tuple;
  n.elems = std::move(items);
  return finish(std::move(n));
}

const Value& Value::empty_set() {
  static const Value v = [] {
    Node n;
    n.kind = Kind::Set;
    return finish(std::move(n));
  }();
  return v;
}

const Value& Value::top() {
  static const Value v = Value::atom("⊤");
  return v;
}

const Value& Value::bottom() {
  static const Value v = Value::atom("⊥");
  return v;
}

const std::string& Value::atom_name() const {
  if (!is_atom()) throw Error("atom_name on a non-atom");
  return node_->name;
}

const std::vector<Value>& Value::elements() const {
  if (is_atom()) throw Error("elements on an atom");
  return node_->elems;
}

bool Value::operator==(const Value& other) const {
  if (node_ == other.node_) return true;
  if (node_->hash != other.node_->hash) return false;
  if (node_->kind != other.node_->kind) return false;
  if (node_->kind == Kind::Atom) return node_->name == other.node_->name;
  const auto& a = node_->elems;
  const auto& b = other.node_->elems;
  if (a.size() != b.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (!(a[i] == b[i])) return false;
  }
  return true;
}

std::strong_ordering Value::operator<=>(const Value& other) const {
  // Total order: atoms < tuples < sets, then contents lexicographically.
  auto rank = [](Kind k) {
    switch (k) {
      case Kind::Atom: return 0;
      case Kind::Tuple: return 1;
      case Kind::Set: return 2;
    }
    return 3;
  };
  if (node_ == other.node_) return std::strong_ordering::equal;
  if (auto c = rank(kind()) <=> rank(other.kind()); c != 0) return c;
  if (kind() == Kind::Atom) return node_->name <=> other.node_->name;
  const auto& a = node_->elems;
  const auto& b = other.node_->elems;
  const std::size_t n = std::min(a.size(), b.size());
  for (std::size_t i = 0; i < n; ++i) {
    if (auto c = a[i] <=> b[i]; c != 0) return c;
  }
  return a.size() <=> b.size();
}

std::string Value::text() const {
  switch (kind()) {
    case Kind::Atom:
      return node_->name;
    case Kind::Set: {
      if (node_->elems.empty()) return "∅";
      std::string out = "{";
      for (std::size_t i = 0; i < node_->elems.size(); ++i) {
        if (i) out += ", ";
        out += node_->elems[i].text();
      }
      out += "}";
      return out;
    }
    case Kind::Tuple: {
      std::string out = "(";
      for (std::size_t i = 0; i < node_->elems.size(); ++i) {
        if (i) out += ", ";
        out += node_->elems[i].text();
      }
      out += ")";
      return out;
    }
  }
  return "?";
}

namespace {

const std::vector<Value>& require_set(const Value& v, const char* op) {
  if (!v.is_set()) {
    throw NonSetOperand(std::string(op) + " needs a set, got " + v.text());
  }
  return v.elements();
}

}  // namespace

Value set_union(const Value& a, const Value& b) {
  const auto& ea = require_set(a, "union");
  const auto& eb = require_set(b, "union");
  std::vector<Value> out;
  out.reserve(ea.size() + eb.size());
  out.insert(out.end(), ea.begin(), ea.end());
  out.insert(out.end(), eb.begin(), eb.end());
  return Value::set(std::move(out));
}

Value set_intersect(const Value& a, const Value& b) {
  const auto& ea = require_set(a, "intersection");
  const auto& eb = require_set(b, "intersection");
  std::vector<Value> out;
  std::set_intersection(ea.begin(), ea.end(), eb.begin(), eb.end(),
                        std::back_inserter(out));
  return Value::set(std::move(out));
}

Value set_difference(const Value& a, const Value& b) {
  const auto& ea = require_set(a, "difference");
  const auto& eb = require_set(b, "difference");
  std::vector<Value> out;
  std::set_difference(ea.begin(), ea.end(), eb.begin(), eb.end(),
                      std::back_inserter(out));
  return Value::set(std::move(out));
}

Value cartesian_product(const Value& a, const Value& b) {
  const auto& ea = require_set(a, "product");
  const auto& eb = require_set(b, "product");
  if (!eb.empty() && ea.size() > limits().max_set_size / eb.size()) {
    throw SizeLimitExceeded("product of " + std::to_string(ea.size()) +
                            " by " + std::to_string(eb.size()) +
                            " elements exceeds the set size limit");
  }
  std::vector<Value> out;
  out.reserve(ea.size() * eb.size());
  for (const Value& x : ea) {
    for (const Value& y : eb) {
      out.push_back(Value::tuple({x, y}));
    }
  }
  return Value::set(std::move(out));
}

Value power_set(const Value& a) {
  const auto& ea = require_set(a, "power set");
  if (ea.size() > limits().max_powerset_base) {
    throw SizeLimitExceeded("power set of " + std::to_string(ea.size()) +
                            " elements exceeds base limit " +
                            std::to_string(limits().max_powerset_base));
  }
  const std::size_t n = ea.size();
  std::vector<Value> out;
  out.reserve(std::size_t(1) << n);
  for (std::size_t mask = 0; mask < (std::size_t(1) << n); ++mask) {
    std::vector<Value> sub;
    for (std::size_t i = 0; i < n; ++i) {
      if (mask & (std::size_t(1) << i)) sub.push_back(ea[i]);
    }
    out.push_back(Value::set(std::move(sub)));
  }
  return Value::set(std::move(out));
}

bool member(const Value& element, const Value& set) {
  const auto& es = require_set(set, "membership");
  auto it = std::lower_bound(es.begin(), es.end(), element);
  return it != es.end() && *it == element;
}

bool subset(const Value& a, const Value& b) {
  const auto& ea = require_set(a, "containment");
  const auto& eb = require_set(b, "containment");
  return std::includes(eb.begin(), eb.end(), ea.begin(), ea.end());
}

std::size_t cardinality(const Value& set) {
  return require_set(set, "cardinality").size();
}

Value nat_value(std::size_t n) { return Value::atom(std::to_string(n)); }

std::optional<std::size_t> nat_of(const Value& v) {
  if (!v.is_atom()) return std::nullopt;
  const std::string& s = v.atom_name();
  if (s.empty() || s.size() > 18) return std::nullopt;
  std::size_t n = 0;
  for (char c : s) {
    if (c < '0' || c > '9') return std::nullopt;
    n = n * 10 + static_cast<std::size_t>(c - '0');
  }
  return n;
}

std::string to_text(const Value& v) { return v.text(); }

std::ostream& operator<<(std::ostream& os, const Value& v) {
  return os << v.text();
}

}  // namespace setkr
