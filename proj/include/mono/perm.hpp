#pragma once

#include <string>
#include <unordered_map>
#include <vector>

#include "mono/types.hpp"

namespace mono {

// Permutation of {0..n-1}, stored as the image vector.
struct Perm {
  std::vector<int> img;

  Perm() = default;
  explicit Perm(std::vector<int> v) : img(std::move(v)) {}
  static Perm identity(int n);

  int size() const { return static_cast<int>(img.size()); }
  int operator()(int x) const { return img[x]; }
  bool is_identity() const;

  Perm after(const Perm& first) const;  // (this*first)(x) = this(first(x))
  Perm inverse() const;
  Perm power(int k) const;  // negative k allowed
  int order() const;

  // disjoint cycle notation with 1-based labels, fixed points omitted
  std::string cycles() const;

  friend bool operator==(const Perm&, const Perm&) = default;
};

struct NamedGen {
  std::string name;
  Perm perm;
};

// Finite permutation group, fully enumerated. Elements are discovered by
// breadth-first search from the identity where one step multiplies by any
// nonzero power of a single generator; the depth of that search is the norm.
class PermGroup {
 public:
  static PermGroup generate(std::vector<NamedGen> gens,
                            size_t order_bound = 10000000);

  size_t order() const { return elems_.size(); }
  int degree() const { return n_; }
  const Perm& element(size_t i) const { return elems_[i]; }
  const std::vector<NamedGen>& gens() const { return gens_; }

  int index_of(const Perm& p) const;  // -1 when absent
  bool contains(const Perm& p) const { return index_of(p) >= 0; }
  // word length over generator powers; -1 when absent
  int norm(const Perm& p) const;

  // element indices, ascending
  std::vector<int> stab_point(int a) const;
  std::vector<int> stab_setwise(const std::vector<int>& s) const;
  std::vector<int> stab_pointwise(const std::vector<int>& s) const;

  // orbit of a label set under the group; each set sorted ascending, the
  // orbit itself in breadth-first discovery order
  std::vector<std::vector<int>> orbit_of_set(const std::vector<int>& s) const;

  // least k >= 1 with tau^k pointwise fixing `fixed` for every tau that
  // stabilizes some point of `anchors`
  int stab_exponent(const std::vector<int>& anchors,
                    const std::vector<int>& fixed) const;

 private:
  int n_ = 0;
  std::vector<NamedGen> gens_;
  std::vector<Perm> elems_;
  std::vector<int> norms_;
  std::unordered_map<std::string, int> index_;
  static std::string key(const Perm& p);
};

}  // namespace mono
