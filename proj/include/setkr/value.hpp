#pragma once

// Hereditarily finite values: atoms, finite sets and fixed-length tuples.
// Values are immutable. Sets are stored in canonical sorted order with
// duplicates removed, so structural equality coincides with extensional
// equality and ordering is a total order usable for canonical rendering.

#include <compare>
#include <cstddef>
#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace setkr {

struct Limits {
  std::size_t max_set_size = 1u << 16;  // elements per set
  std::size_t max_depth = 64;           // nesting depth, atoms are 0
  std::size_t max_powerset_base = 16;   // largest set power_set accepts
};

// Process-wide limits. Mutable so the CLI can apply environment overrides;
// tests restore what they change.
Limits& limits();

class Value {
 public:
  enum class Kind : std::uint8_t { Atom, Set, Tuple };

  // Default-constructed value is the empty set.
  Value();

  static Value atom(std::string name);
  static Value set(std::vector<Value> elements);
  static Value tuple(std::vector<Value> items);  // at least two items

  static const Value& empty_set();
  static const Value& top();     // distinguished atom for truth
  static const Value& bottom();  // distinguished atom for falsity

  Kind kind() const { return node_->kind; }
  bool is_atom() const { return kind() == Kind::Atom; }
  bool is_set() const { return kind() == Kind::Set; }
  bool is_tuple() const { return kind() == Kind::Tuple; }

  const std::string& atom_name() const;
  // Set elements in canonical order, or tuple items in positional order.
  const std::vector<Value>& elements() const;
  std::size_t size() const { return elements().size(); }

  std::size_t depth() const { return node_->depth; }
  std::size_t hash() const { return node_->hash; }

  // Canonical text: atoms by name, sets {a, b}, tuples (a, b), the empty
  // set as a dedicated glyph.
  std::string text() const;

  bool operator==(const Value& other) const;
  bool operator!=(const Value& other) const { return !(*this == other); }
  std::strong_ordering operator<=>(const Value& other) const;

 private:
  struct Node {
    Kind kind = Kind::Atom;
    std::uint32_t depth = 0;
    std::size_t hash = 0;
    std::string name;
    std::vector<Value> elems;
  };

  explicit Value(std::shared_ptr<const Node> node) : node_(std::move(node)) {}
  static Value finish(Node node);

  std::shared_ptr<const Node> node_;
};

struct ValueHash {
  std::size_t operator()(const Value& v) const { return v.hash(); }
};

// Set algebra. All of these throw NonSetOperand when given a non-set where
// a set is required, and SizeLimitExceeded when a result would overflow the
// configured limits.
Value set_union(const Value& a, const Value& b);
Value set_intersect(const Value& a, const Value& b);
Value set_difference(const Value& a, const Value& b);
// Pairwise product: the set of 2-tuples (x, y) with x in a, y in b.
Value cartesian_product(const Value& a, const Value& b);
Value power_set(const Value& a);

bool member(const Value& element, const Value& set);
bool subset(const Value& a, const Value& b);
std::size_t cardinality(const Value& set);

// Natural numbers exchanged with the arithmetic built-ins are atoms whose
// name is the decimal numeral.
Value nat_value(std::size_t n);
std::optional<std::size_t> nat_of(const Value& v);

inline bool is_true(const Value& v) { return v == Value::top(); }

std::string to_text(const Value& v);
std::ostream& operator<<(std::ostream& os, const Value& v);

}  // namespace setkr
