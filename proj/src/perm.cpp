#include "mono/perm.hpp"

#include <algorithm>
#include <deque>
#include <numeric>

namespace mono {

Perm Perm::identity(int n) {
  std::vector<int> v(n);
  std::iota(v.begin(), v.end(), 0);
  return Perm(std::move(v));
}

bool Perm::is_identity() const {
  for (int i = 0; i < size(); ++i)
    if (img[i] != i) return false;
  return true;
}

Perm Perm::after(const Perm& first) const {
  std::vector<int> v(img.size());
  for (size_t i = 0; i < img.size(); ++i) v[i] = img[first.img[i]];
  return Perm(std::move(v));
}

Perm Perm::inverse() const {
  std::vector<int> v(img.size());
  for (size_t i = 0; i < img.size(); ++i) v[img[i]] = static_cast<int>(i);
  return Perm(std::move(v));
}

Perm Perm::power(int k) const {
  int m = order();
  k %= m;
  if (k < 0) k += m;
  Perm r = identity(size());
  for (int i = 0; i < k; ++i) r = after(r);
  return r;
}

int Perm::order() const {
  int m = 1;
  std::vector<char> seen(size(), 0);
  for (int i = 0; i < size(); ++i) {
    if (seen[i]) continue;
    int len = 0, j = i;
    while (!seen[j]) {
      seen[j] = 1;
      j = img[j];
      ++len;
    }
    m = std::lcm(m, len);
  }
  return m;
}

std::string Perm::cycles() const {
  std::string out;
  std::vector<char> seen(size(), 0);
  for (int i = 0; i < size(); ++i) {
    if (seen[i] || img[i] == i) continue;
    out += "(";
    int j = i;
    bool leading = true;
    while (!seen[j]) {
      seen[j] = 1;
      if (!leading) out += " ";
      leading = false;
      out += std::to_string(j + 1);
      j = img[j];
    }
    out += ")";
  }
  return out.empty() ? "id" : out;
}

std::string PermGroup::key(const Perm& p) {
  std::string s;
  s.reserve(p.size() * 2);
  for (int x : p.img) {
    s += static_cast<char>(x & 0xff);
    s += static_cast<char>((x >> 8) & 0xff);
  }
  return s;
}

PermGroup PermGroup::generate(std::vector<NamedGen> gens, size_t order_bound) {
  PermGroup g;
  g.gens_ = std::move(gens);
  g.n_ = g.gens_.empty() ? 0 : g.gens_[0].perm.size();
  for (const auto& ng : g.gens_)
    if (ng.perm.size() != g.n_)
      fail("PartitionInconsistent", "generators act on different label sets");

  // one BFS step: multiply by any nonzero power of a single generator
  std::vector<Perm> steps;
  for (const auto& ng : g.gens_) {
    int m = ng.perm.order();
    Perm p = ng.perm;
    for (int k = 1; k < m; ++k) {
      steps.push_back(p);
      p = ng.perm.after(p);
    }
    if (m == 1) continue;
  }

  Perm id = Perm::identity(g.n_);
  g.elems_.push_back(id);
  g.norms_.push_back(0);
  g.index_[key(id)] = 0;
  std::deque<int> queue{0};
  while (!queue.empty()) {
    int cur = queue.front();
    queue.pop_front();
    for (const Perm& s : steps) {
      Perm nxt = s.after(g.elems_[cur]);
      std::string k = key(nxt);
      if (g.index_.count(k)) continue;
      if (g.elems_.size() >= order_bound)
        fail("OrderBound", "group enumeration exceeded the element bound");
      g.index_[k] = static_cast<int>(g.elems_.size());
      g.elems_.push_back(std::move(nxt));
      g.norms_.push_back(g.norms_[cur] + 1);
      queue.push_back(static_cast<int>(g.elems_.size()) - 1);
    }
  }
  return g;
}

int PermGroup::index_of(const Perm& p) const {
  auto it = index_.find(key(p));
  return it == index_.end() ? -1 : it->second;
}

int PermGroup::norm(const Perm& p) const {
  int i = index_of(p);
  return i < 0 ? -1 : norms_[i];
}

std::vector<int> PermGroup::stab_point(int a) const {
  std::vector<int> out;
  for (size_t i = 0; i < elems_.size(); ++i)
    if (elems_[i](a) == a) out.push_back(static_cast<int>(i));
  return out;
}

std::vector<int> PermGroup::stab_setwise(const std::vector<int>& s) const {
  std::vector<int> sorted = s;
  std::sort(sorted.begin(), sorted.end());
  std::vector<int> out, im;
  for (size_t i = 0; i < elems_.size(); ++i) {
    im.clear();
    for (int x : sorted) im.push_back(elems_[i](x));
    std::sort(im.begin(), im.end());
    if (im == sorted) out.push_back(static_cast<int>(i));
  }
  return out;
}

std::vector<int> PermGroup::stab_pointwise(const std::vector<int>& s) const {
  std::vector<int> out;
  for (size_t i = 0; i < elems_.size(); ++i) {
    bool ok = true;
    for (int x : s) ok = ok && elems_[i](x) == x;
    if (ok) out.push_back(static_cast<int>(i));
  }
  return out;
}

std::vector<std::vector<int>> PermGroup::orbit_of_set(
    const std::vector<int>& s) const {
  std::vector<int> start = s;
  std::sort(start.begin(), start.end());
  std::vector<std::vector<int>> orbit{start};
  std::unordered_map<std::string, int> seen;
  auto skey = [](const std::vector<int>& v) {
    std::string k;
    for (int x : v) {
      k += static_cast<char>(x & 0xff);
      k += static_cast<char>((x >> 8) & 0xff);
    }
    return k;
  };
  seen[skey(start)] = 0;
  for (size_t head = 0; head < orbit.size(); ++head) {
    std::vector<int> cur = orbit[head];
    for (const auto& ng : gens_) {
      std::vector<int> im;
      for (int x : cur) im.push_back(ng.perm(x));
      std::sort(im.begin(), im.end());
      std::string k = skey(im);
      if (!seen.count(k)) {
        seen[k] = static_cast<int>(orbit.size());
        orbit.push_back(std::move(im));
      }
    }
  }
  return orbit;
}

int PermGroup::stab_exponent(const std::vector<int>& anchors,
                             const std::vector<int>& fixed) const {
  auto fixes_all = [&](const Perm& p) {
    for (int x : fixed)
      if (p(x) != x) return false;
    return true;
  };
  long long k = 1;
  for (const auto& elem : elems_) {
    bool relevant = false;
    for (int a : anchors) relevant = relevant || elem(a) == a;
    if (!relevant) continue;
    int m = elem.order();
    Perm p = elem;
    int e = m;  // tau^order is the identity, which certainly fixes everything
    for (int j = 1; j <= m; ++j) {
      if (fixes_all(p)) {
        e = j;
        break;
      }
      p = elem.after(p);
    }
    k = std::lcm(k, static_cast<long long>(e));
  }
  return static_cast<int>(k);
}

}  // namespace mono
