#ifndef GL2RES_FFIELD_HPP
#define GL2RES_FFIELD_HPP

#include <algorithm>
#include <cstdint>
#include <map>
#include <numeric>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "gl2res/common.hpp"

/**
 * @file ffield.hpp
 * @brief Finite fields F_{p^d} with table arithmetic, and the tower
 * F_p, F_{p^2}, F_q, F_{q^2} with fixed compatible embeddings.
 *
 * Elements are indices into the lexicographic order of coefficient vectors,
 * so "least element" is integer comparison. Multiplication goes through
 * discrete log tables, addition through Zech logarithms; both are O(1).
 */

namespace gl2res {

namespace fp {

/// Polynomial over F_p, coefficients low to high, no trailing zeros.
using Poly = std::vector<int>;

inline bool is_prime(std::int64_t n)
{
  if (n < 2)
    return false;
  for (std::int64_t d = 2; d * d <= n; ++d)
    if (n % d == 0)
      return false;
  return true;
}

inline std::vector<std::uint64_t> prime_factors(std::uint64_t n)
{
  std::vector<std::uint64_t> out;
  for (std::uint64_t d = 2; d * d <= n; ++d) {
    if (n % d == 0) {
      out.push_back(d);
      while (n % d == 0)
        n /= d;
    }
  }
  if (n > 1)
    out.push_back(n);
  return out;
}

inline int inv_mod(int a, int p)
{
  int r = 1, base = ((a % p) + p) % p, e = p - 2;
  while (e > 0) {
    if (e & 1)
      r = r * base % p;
    base = base * base % p;
    e >>= 1;
  }
  return r;
}

inline void trim(Poly& a)
{
  while (!a.empty() && a.back() == 0)
    a.pop_back();
}

inline int deg(const Poly& a) { return static_cast<int>(a.size()) - 1; }

inline Poly mod(Poly a, const Poly& m, int p)
{
  trim(a);
  const int dm = deg(m);
  const int lead_inv = inv_mod(m.back(), p);
  while (deg(a) >= dm) {
    const int shift = deg(a) - dm;
    const int c = a.back() * lead_inv % p;
    for (int i = 0; i <= dm; ++i)
      a[i + shift] = ((a[i + shift] - c * m[i]) % p + p) % p;
    trim(a);
  }
  return a;
}

inline Poly mul(const Poly& a, const Poly& b, int p)
{
  if (a.empty() || b.empty())
    return {};
  Poly r(a.size() + b.size() - 1, 0);
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < b.size(); ++j)
      r[i + j] = (r[i + j] + a[i] * b[j]) % p;
  trim(r);
  return r;
}

inline Poly mulmod(const Poly& a, const Poly& b, const Poly& m, int p)
{
  return mod(mul(a, b, p), m, p);
}

inline Poly powmod(Poly base, std::uint64_t e, const Poly& m, int p)
{
  Poly r{1};
  base = mod(std::move(base), m, p);
  while (e > 0) {
    if (e & 1)
      r = mulmod(r, base, m, p);
    base = mulmod(base, base, m, p);
    e >>= 1;
  }
  return mod(r, m, p);
}

inline Poly sub(Poly a, const Poly& b, int p)
{
  if (a.size() < b.size())
    a.resize(b.size(), 0);
  for (std::size_t i = 0; i < b.size(); ++i)
    a[i] = ((a[i] - b[i]) % p + p) % p;
  trim(a);
  return a;
}

inline Poly gcd(Poly a, Poly b, int p)
{
  trim(a);
  trim(b);
  while (!b.empty()) {
    Poly r = mod(a, b, p);
    a = std::move(b);
    b = std::move(r);
  }
  if (!a.empty()) {
    const int li = inv_mod(a.back(), p);
    for (auto& c : a)
      c = c * li % p;
  }
  return a;
}

/// Ben-Or test: f (monic, degree d) is irreducible iff
/// gcd(f, x^{p^i} - x) = 1 for i = 1..d/2.
inline bool is_irreducible(const Poly& f, int p)
{
  const int d = deg(f);
  if (d < 1)
    return false;
  if (d == 1)
    return true;
  const Poly x{0, 1};
  Poly h = x;
  for (int i = 1; i <= d / 2; ++i) {
    h = powmod(h, static_cast<std::uint64_t>(p), f, p);
    if (deg(gcd(f, sub(h, x, p), p)) >= 1)
      return false;
  }
  return true;
}

/// Least monic irreducible polynomial of degree d, ordering candidates by
/// (c0, c1, ..., c_{d-1}) lexicographically.
inline Poly least_irreducible(int p, int d)
{
  const std::uint64_t count = ipow(static_cast<std::uint64_t>(p), static_cast<unsigned>(d));
  for (std::uint64_t n = 0; n < count; ++n) {
    Poly f(d + 1, 0);
    std::uint64_t rest = n;
    for (int i = d - 1; i >= 0; --i) {
      f[i] = static_cast<int>(rest % p);
      rest /= p;
    }
    f[d] = 1;
    if (is_irreducible(f, p))
      return f;
  }
  throw std::logic_error("no irreducible polynomial found");
}

} // namespace fp

class Field {
 public:
  /// F_p[x] / (modulus); modulus is monic of degree >= 1, low to high.
  Field(int p, fp::Poly modulus)
    : p_(p), degree_(fp::deg(modulus)), modulus_(std::move(modulus))
  {
    if (degree_ < 1 || modulus_.back() != 1)
      throw InvalidParameters("field modulus must be monic of degree >= 1");
    size_ = static_cast<std::uint32_t>(ipow(static_cast<std::uint64_t>(p_),
                                            static_cast<unsigned>(degree_)));
    place_.resize(degree_);
    for (int i = 0; i < degree_; ++i)
      place_[i] = static_cast<std::uint32_t>(ipow(p_, static_cast<unsigned>(degree_ - 1 - i)));
    one_ = place_[0];
    build_tables();
  }

  int characteristic() const { return p_; }
  int degree() const { return degree_; }
  std::uint32_t size() const { return size_; }
  std::uint32_t units() const { return size_ - 1; }
  const fp::Poly& modulus() const { return modulus_; }

  Elem zero() const { return 0; }
  Elem one() const { return one_; }

  Elem from_int(std::int64_t c) const
  {
    const std::int64_t r = ((c % p_) + p_) % p_;
    return static_cast<Elem>(r) * one_;
  }

  /// Coefficients c0..c_{d-1} in the basis 1, x, ..., x^{d-1}.
  Elem from_coeffs(std::span<const int> c) const
  {
    Elem e = 0;
    for (int i = 0; i < degree_ && i < static_cast<int>(c.size()); ++i)
      e += static_cast<Elem>(((c[i] % p_) + p_) % p_) * place_[i];
    return e;
  }

  Elem from_poly(const fp::Poly& c) const { return from_coeffs(std::span<const int>(c)); }

  std::vector<int> coeffs(Elem x) const
  {
    std::vector<int> c(degree_);
    for (int i = 0; i < degree_; ++i)
      c[i] = static_cast<int>((x / place_[i]) % p_);
    return c;
  }

  Elem neg(Elem x) const { return neg_[x]; }

  Elem add(Elem a, Elem b) const
  {
    if (a == 0)
      return b;
    if (b == 0)
      return a;
    const std::uint32_t la = log_[a], lb = log_[b];
    const std::uint32_t k = lb >= la ? lb - la : lb + units() - la;
    const std::uint32_t z = zech_[k];
    if (z == kNone)
      return 0;
    return exp_[la + z];
  }

  Elem sub(Elem a, Elem b) const { return add(a, neg_[b]); }

  Elem mul(Elem a, Elem b) const
  {
    if (a == 0 || b == 0)
      return 0;
    return exp_[log_[a] + log_[b]];
  }

  Elem inv(Elem a) const
  {
    if (a == 0)
      throw std::domain_error("inverse of zero");
    const std::uint32_t l = log_[a];
    return exp_[l == 0 ? 0 : units() - l];
  }

  Elem div(Elem a, Elem b) const { return mul(a, inv(b)); }

  /// a^e; negative exponents allowed for nonzero a.
  Elem pow(Elem a, std::int64_t e) const
  {
    if (a == 0) {
      if (e < 0)
        throw std::domain_error("negative power of zero");
      return e == 0 ? one_ : 0;
    }
    const std::int64_t n = units();
    const std::int64_t k = ((static_cast<std::int64_t>(log_[a]) * (((e % n) + n) % n)) % n);
    return exp_[static_cast<std::size_t>(k)];
  }

  Elem primitive() const { return exp_[1 % units()]; }

  std::uint32_t log(Elem a) const
  {
    if (a == 0)
      throw std::domain_error("log of zero");
    return log_[a];
  }

  Elem exp(std::uint64_t k) const { return exp_[k % units()]; }

  bool is_square(Elem a) const { return a == 0 || p_ == 2 || log_[a] % 2 == 0; }

  std::uint64_t order(Elem a) const
  {
    if (a == 0)
      throw std::domain_error("order of zero");
    const std::uint64_t n = units();
    return n / std::gcd<std::uint64_t, std::uint64_t>(n, log_[a]);
  }

  /// Evaluate a polynomial with F_p coefficients (low to high) at x.
  Elem eval(const fp::Poly& f, Elem x) const
  {
    Elem acc = 0;
    for (auto it = f.rbegin(); it != f.rend(); ++it)
      acc = add(mul(acc, x), from_int(*it));
    return acc;
  }

 private:
  static constexpr std::uint32_t kNone = 0xffffffffu;

  fp::Poly decode(Elem x) const
  {
    fp::Poly c = coeffs(x);
    fp::trim(c);
    return c;
  }

  void build_tables()
  {
    const std::uint32_t n = units();

    neg_.resize(size_);
    for (Elem x = 0; x < size_; ++x) {
      auto c = coeffs(x);
      for (auto& v : c)
        v = (p_ - v) % p_;
      neg_[x] = from_coeffs(c);
    }

    // least primitive element in lexicographic order
    const auto factors = fp::prime_factors(n);
    fp::Poly g;
    for (Elem cand = 1; cand < size_; ++cand) {
      const fp::Poly c = decode(cand);
      bool primitive = true;
      for (auto l : factors) {
        if (fp::powmod(c, n / l, modulus_, p_) == fp::Poly{1}) {
          primitive = false;
          break;
        }
      }
      if (n == 1 && c != fp::Poly{1})
        primitive = false;
      if (primitive) {
        g = c;
        break;
      }
    }
    if (g.empty())
      throw std::logic_error("no primitive element found");

    exp_.assign(2 * static_cast<std::size_t>(n), 0);
    log_.assign(size_, 0);
    fp::Poly cur{1};
    for (std::uint32_t k = 0; k < n; ++k) {
      const Elem e = from_poly(cur);
      exp_[k] = e;
      exp_[k + n] = e;
      log_[e] = k;
      cur = fp::mulmod(cur, g, modulus_, p_);
    }

    zech_.assign(n, kNone);
    for (std::uint32_t k = 0; k < n; ++k) {
      auto c = coeffs(exp_[k]);
      c[0] = (c[0] + 1) % p_;
      const Elem s = from_coeffs(c);
      if (s != 0)
        zech_[k] = log_[s];
    }
  }

  int p_;
  int degree_;
  fp::Poly modulus_;
  std::uint32_t size_ = 0;
  Elem one_ = 1;
  std::vector<std::uint32_t> place_;
  std::vector<Elem> neg_;
  std::vector<Elem> exp_;
  std::vector<std::uint32_t> log_;
  std::vector<std::uint32_t> zech_;
};

struct TowerLimits {
  int f_max = 4;
  std::uint64_t max_field_size = std::uint64_t{1} << 24;
};

class FieldTower;
Elem find_eta(const FieldTower& tower);
Elem find_epsilon(const FieldTower& tower);

class FieldTower {
 public:
  static FieldTower build(int p, int f, TowerLimits limits = {})
  {
    if (p == 2)
      throw InvalidParameters(
        "p = 2 rejected: the anisotropic torus [[a,b],[b*eps^2,a]] needs eps with "
        "eps^2 in F_q and eps outside F_q, which exists only in odd characteristic");
    if (!fp::is_prime(p))
      throw InvalidParameters("p = " + std::to_string(p) + " is not a prime");
    if (f < 1 || f > limits.f_max)
      throw InvalidParameters("f = " + std::to_string(f) + " outside [1, " +
                              std::to_string(limits.f_max) + "]");
    const std::uint64_t top = ipow(static_cast<std::uint64_t>(p), static_cast<unsigned>(2 * f));
    if (top > limits.max_field_size)
      throw InvalidParameters("|F_q2| = " + std::to_string(top) + " exceeds the field size limit " +
                              std::to_string(limits.max_field_size));

    FieldTower t;
    t.p_ = p;
    t.f_ = f;
    std::vector<int> degs{1, 2, f, 2 * f};
    std::sort(degs.begin(), degs.end());
    degs.erase(std::unique(degs.begin(), degs.end()), degs.end());
    for (int d : degs)
      t.fields_.emplace(d, Field(p, fp::least_irreducible(p, d)));
    t.build_embeddings(degs);
    t.eta_ = find_eta(t);
    t.epsilon_ = find_epsilon(t);
    return t;
  }

  int p() const { return p_; }
  int f() const { return f_; }
  std::uint64_t q() const { return ipow(static_cast<std::uint64_t>(p_), static_cast<unsigned>(f_)); }

  int degree(Level l) const
  {
    switch (l) {
    case Level::P: return 1;
    case Level::P2: return 2;
    case Level::Q: return f_;
    case Level::Q2: return 2 * f_;
    }
    return 1;
  }

  const Field& field(Level l) const { return fields_.at(degree(l)); }
  const Field& field_of_degree(int d) const { return fields_.at(d); }

  std::vector<int> degrees() const
  {
    std::vector<int> out;
    for (const auto& [d, fld] : fields_)
      out.push_back(d);
    return out;
  }

  bool same_field(Level a, Level b) const { return degree(a) == degree(b); }

  /// True when the field at `sub` embeds into the field at `super`.
  bool embeds(Level sub, Level super) const { return degree(super) % degree(sub) == 0; }

  /// The larger of two levels, provided one field contains the other.
  Level join(Level a, Level b) const
  {
    if (embeds(a, b))
      return b;
    if (embeds(b, a))
      return a;
    throw InvalidParameters(std::string("no common field for ") + level_name(a) + " and " +
                            level_name(b));
  }

  Elem embed(Elem x, Level from, Level to) const { return embed_degree(x, degree(from), degree(to)); }

  Elem embed_degree(Elem x, int from, int to) const
  {
    if (from == to)
      return x;
    if (to % from != 0)
      throw InvalidParameters("no embedding F_{p^" + std::to_string(from) + "} -> F_{p^" +
                              std::to_string(to) + "}");
    return embeddings_.at({from, to}).image.at(x);
  }

  /// Preimage of x (at `from`) in the subfield at `to`, if it lies there.
  std::optional<Elem> descend(Elem x, Level from, Level to) const
  {
    const int df = degree(from), dt = degree(to);
    if (df == dt)
      return x;
    if (df % dt != 0)
      throw InvalidParameters(std::string("no subfield ") + level_name(to) + " of " + level_name(from));
    const auto v = embeddings_.at({dt, df}).preimage.at(x);
    if (v < 0)
      return std::nullopt;
    return static_cast<Elem>(v);
  }

  bool lies_in(Elem x, Level from, Level sub) const { return descend(x, from, sub).has_value(); }

  /// x^(p^k) in the field at `level`.
  Elem frobenius(Elem x, Level level, std::uint64_t k) const
  {
    const Field& F = field(level);
    if (x == 0)
      return 0;
    std::uint64_t e = 1;
    for (std::uint64_t i = 0; i < k % static_cast<std::uint64_t>(F.degree()); ++i)
      e = e * static_cast<std::uint64_t>(p_) % F.units();
    return F.exp(static_cast<std::uint64_t>(F.log(x)) * e);
  }

  Elem eta() const { return eta_; }
  Elem epsilon() const { return epsilon_; }

  Elem eta_squared() const
  {
    const Field& F = field(Level::P2);
    return *descend(F.mul(eta_, eta_), Level::P2, Level::P);
  }

  Elem epsilon_squared() const
  {
    const Field& F = field(Level::Q2);
    return *descend(F.mul(epsilon_, epsilon_), Level::Q2, Level::Q);
  }

 private:
  struct Embedding {
    std::vector<Elem> image;
    std::vector<std::int64_t> preimage;
  };

  FieldTower() = default;

  void build_embeddings(const std::vector<int>& degs)
  {
    std::vector<std::pair<int, int>> pairs;
    for (int d : degs)
      for (int e : degs)
        if (d < e && e % d == 0)
          pairs.emplace_back(d, e);
    std::sort(pairs.begin(), pairs.end(), [](auto x, auto y) {
      const int rx = x.second / x.first, ry = y.second / y.first;
      return rx != ry ? rx < ry : x < y;
    });

    for (auto [d, e] : pairs) {
      const Field& sub = fields_.at(d);
      const Field& super = fields_.at(e);
      Embedding emb;
      emb.image.resize(sub.size());

      // compose through the least intermediate level so that diagrams commute
      int mid = 0;
      for (int m : degs)
        if (m > d && m < e && m % d == 0 && e % m == 0) {
          mid = m;
          break;
        }
      if (mid != 0) {
        const auto& lo = embeddings_.at({d, mid}).image;
        const auto& hi = embeddings_.at({mid, e}).image;
        for (Elem x = 0; x < sub.size(); ++x)
          emb.image[x] = hi[lo[x]];
      } else {
        Elem root = 0;
        bool found = false;
        for (Elem y = 0; y < super.size(); ++y)
          if (super.eval(sub.modulus(), y) == 0) {
            root = y;
            found = true;
            break;
          }
        if (!found)
          throw std::logic_error("defining polynomial has no root in the extension");
        for (Elem x = 0; x < sub.size(); ++x) {
          const auto c = sub.coeffs(x);
          Elem acc = 0;
          for (int i = d - 1; i >= 0; --i)
            acc = super.add(super.mul(acc, root), super.from_int(c[i]));
          emb.image[x] = acc;
        }
      }
      emb.preimage.assign(super.size(), -1);
      for (Elem x = 0; x < sub.size(); ++x)
        emb.preimage[emb.image[x]] = x;
      embeddings_.emplace(std::make_pair(d, e), std::move(emb));
    }
  }

  int p_ = 0;
  int f_ = 0;
  std::map<int, Field> fields_;
  std::map<std::pair<int, int>, Embedding> embeddings_;
  Elem eta_ = 0;
  Elem epsilon_ = 0;
};

/// Least element of F_{p^2} outside F_p whose square lies in F_p.
inline Elem find_eta(const FieldTower& tower)
{
  const Field& F = tower.field(Level::P2);
  for (Elem x = 0; x < F.size(); ++x) {
    if (tower.lies_in(x, Level::P2, Level::P))
      continue;
    if (tower.lies_in(F.mul(x, x), Level::P2, Level::P))
      return x;
  }
  throw std::logic_error("no eta in F_p2");
}

/// The distinguished eps in F_{q^2} \ F_q with eps^2 in F_q: the image of eta
/// when f is odd, otherwise the least square root of the least non-square of F_q.
inline Elem find_epsilon(const FieldTower& tower)
{
  if (tower.f() % 2 == 1)
    return tower.embed(tower.eta(), Level::P2, Level::Q2);
  const Field& Fq = tower.field(Level::Q);
  const Field& Fq2 = tower.field(Level::Q2);
  Elem nonsquare = 0;
  for (Elem x = 1; x < Fq.size(); ++x)
    if (!Fq.is_square(x)) {
      nonsquare = x;
      break;
    }
  const Elem target = tower.embed(nonsquare, Level::Q, Level::Q2);
  for (Elem y = 0; y < Fq2.size(); ++y)
    if (Fq2.mul(y, y) == target)
      return y;
  throw std::logic_error("non-square of F_q has no root in F_q2");
}

} // namespace gl2res

#endif // GL2RES_FFIELD_HPP
