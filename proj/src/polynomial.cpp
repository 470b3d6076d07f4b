#include "polycert/polynomial.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>
#include <stdexcept>

#include "json.hpp"

namespace polycert {

namespace {
int total_degree(const Monomial& m) { return std::accumulate(m.begin(), m.end(), 0); }
}  // namespace

Polynomial Polynomial::constant(int nvars, const Rational& c) {
  Polynomial p(nvars);
  p.add_term(Monomial(nvars, 0), c);
  return p;
}

Polynomial Polynomial::variable(int nvars, int i) {
  if (i < 0 || i >= nvars) throw std::out_of_range("variable index");
  Polynomial p(nvars);
  Monomial m(nvars, 0);
  m[i] = 1;
  p.add_term(m, 1);
  return p;
}

std::optional<int> Polynomial::degree() const {
  std::optional<int> d;
  for (const auto& [m, c] : terms_) d = std::max(d.value_or(0), total_degree(m));
  return d;
}

void Polynomial::add_term(const Monomial& m, const Rational& c) {
  if (static_cast<int>(m.size()) != nvars_) throw std::invalid_argument("monomial arity mismatch");
  if (c == 0) return;
  auto it = terms_.find(m);
  if (it == terms_.end()) {
    terms_.emplace(m, c);
  } else {
    it->second += c;
    if (it->second == 0) terms_.erase(it);
  }
}

Rational Polynomial::coeff(const Monomial& m) const {
  auto it = terms_.find(m);
  return it == terms_.end() ? Rational(0) : it->second;
}

Polynomial Polynomial::operator+(const Polynomial& rhs) const {
  Polynomial out = *this;
  out += rhs;
  return out;
}

Polynomial& Polynomial::operator+=(const Polynomial& rhs) {
  if (nvars_ != rhs.nvars_) throw std::invalid_argument("nvars mismatch");
  for (const auto& [m, c] : rhs.terms_) add_term(m, c);
  return *this;
}

Polynomial& Polynomial::operator-=(const Polynomial& rhs) {
  if (nvars_ != rhs.nvars_) throw std::invalid_argument("nvars mismatch");
  for (const auto& [m, c] : rhs.terms_) add_term(m, -c);
  return *this;
}

Polynomial Polynomial::operator-(const Polynomial& rhs) const {
  Polynomial out = *this;
  out -= rhs;
  return out;
}

Polynomial Polynomial::operator-() const {
  Polynomial out(nvars_);
  for (const auto& [m, c] : terms_) out.terms_.emplace(m, -c);
  return out;
}

Polynomial Polynomial::operator*(const Polynomial& rhs) const {
  if (nvars_ != rhs.nvars_) throw std::invalid_argument("nvars mismatch");
  Polynomial out(nvars_);
  for (const auto& [ma, ca] : terms_)
    for (const auto& [mb, cb] : rhs.terms_) {
      Monomial m(nvars_);
      for (int i = 0; i < nvars_; ++i) m[i] = ma[i] + mb[i];
      out.add_term(m, ca * cb);
    }
  return out;
}

Polynomial Polynomial::operator*(const Rational& s) const {
  Polynomial out(nvars_);
  if (s == 0) return out;
  for (const auto& [m, c] : terms_) out.terms_.emplace(m, c * s);
  return out;
}

Polynomial Polynomial::pow(int e) const {
  if (e < 0) throw std::invalid_argument("negative exponent");
  Polynomial out = constant(nvars_, 1);
  for (int i = 0; i < e; ++i) out = out * (*this);
  return out;
}

Rational Polynomial::evaluate(const std::vector<Rational>& x) const {
  if (static_cast<int>(x.size()) != nvars_) throw std::invalid_argument("point dimension mismatch");
  Rational s = 0;
  for (const auto& [m, c] : terms_) {
    Rational t = c;
    for (int i = 0; i < nvars_; ++i)
      for (int k = 0; k < m[i]; ++k) t *= x[i];
    s += t;
  }
  return s;
}

double Polynomial::evaluate(const std::vector<double>& x) const {
  if (static_cast<int>(x.size()) != nvars_) throw std::invalid_argument("point dimension mismatch");
  double s = 0;
  for (const auto& [m, c] : terms_) {
    double t = to_double(c);
    for (int i = 0; i < nvars_; ++i)
      if (m[i] != 0) t *= std::pow(x[i], m[i]);
    s += t;
  }
  return s;
}

Polynomial Polynomial::partial(int i) const {
  Polynomial out(nvars_);
  for (const auto& [m, c] : terms_) {
    if (m[i] == 0) continue;
    Monomial d = m;
    d[i] -= 1;
    out.add_term(d, c * m[i]);
  }
  return out;
}

std::vector<Polynomial> Polynomial::gradient() const {
  std::vector<Polynomial> g;
  g.reserve(nvars_);
  for (int i = 0; i < nvars_; ++i) g.push_back(partial(i));
  return g;
}

std::vector<std::vector<Polynomial>> Polynomial::hessian() const {
  std::vector<std::vector<Polynomial>> h(nvars_, std::vector<Polynomial>(nvars_, Polynomial(nvars_)));
  for (int i = 0; i < nvars_; ++i) {
    Polynomial pi = partial(i);
    for (int j = i; j < nvars_; ++j) {
      h[i][j] = pi.partial(j);
      if (j != i) h[j][i] = h[i][j];
    }
  }
  return h;
}

Polynomial Polynomial::homogeneous_part(int d) const {
  Polynomial out(nvars_);
  for (const auto& [m, c] : terms_)
    if (total_degree(m) == d) out.terms_.emplace(m, c);
  return out;
}

Polynomial Polynomial::compose(const std::vector<Polynomial>& images) const {
  if (static_cast<int>(images.size()) != nvars_) throw std::invalid_argument("compose arity mismatch");
  int new_nvars = images.empty() ? 0 : images[0].nvars();
  Polynomial out(new_nvars);
  for (const auto& [m, c] : terms_) {
    Polynomial t = Polynomial::constant(new_nvars, c);
    for (int i = 0; i < nvars_; ++i)
      if (m[i] > 0) t = t * images[i].pow(m[i]);
    out += t;
  }
  return out;
}

double Polynomial::max_abs_coeff_double() const {
  double m = 0;
  for (const auto& [mon, c] : terms_) m = std::max(m, std::abs(to_double(c)));
  return m;
}

std::string Polynomial::to_string() const {
  if (terms_.empty()) return "0";
  std::ostringstream os;
  bool first = true;
  for (const auto& [m, c] : terms_) {
    if (!first) os << " + ";
    first = false;
    os << "(" << c.str() << ")";
    for (int i = 0; i < nvars_; ++i) {
      if (m[i] == 0) continue;
      os << "*x" << (i + 1);
      if (m[i] > 1) os << "^" << m[i];
    }
  }
  return os.str();
}

std::string Polynomial::to_json() const {
  nlohmann::json j;
  j["nvars"] = nvars_;
  j["terms"] = nlohmann::json::array();
  for (const auto& [m, c] : terms_) {
    nlohmann::json t;
    t["coeff"] = rational_to_string(c);
    t["exps"] = m;
    j["terms"].push_back(std::move(t));
  }
  return j.dump();
}

Polynomial Polynomial::from_json(const std::string& text) {
  nlohmann::json j = nlohmann::json::parse(text);
  int nvars = j.at("nvars").get<int>();
  if (nvars < 0) throw std::invalid_argument("nvars must be nonnegative");
  Polynomial p(nvars);
  for (const auto& t : j.at("terms")) {
    Monomial m = t.at("exps").get<Monomial>();
    if (static_cast<int>(m.size()) != nvars) throw std::invalid_argument("exps length != nvars");
    for (int e : m)
      if (e < 0) throw std::invalid_argument("negative exponent");
    if (p.terms().count(m)) throw std::invalid_argument("duplicate exponent vector");
    p.add_term(m, parse_rational(t.at("coeff").get<std::string>()));
  }
  return p;
}

Point Point::from_rationals(std::vector<Rational> coords) {
  Point p;
  p.exact = true;
  p.double_coords.reserve(coords.size());
  for (const auto& c : coords) p.double_coords.push_back(to_double(c));
  p.rational_coords = std::move(coords);
  return p;
}

Point Point::from_doubles(std::vector<double> coords) {
  Point p;
  p.exact = false;
  p.double_coords = std::move(coords);
  return p;
}

Rational evaluate_exact(const Polynomial& p, const Point& x) {
  if (!x.exact) throw std::invalid_argument("evaluate_exact requires a rational point");
  return p.evaluate(x.rational_coords);
}

double evaluate_num(const Polynomial& p, const Point& x) {
  if (p.nvars() != x.dim()) throw std::invalid_argument("point dimension mismatch");
  return p.evaluate(x.double_coords);
}

namespace {
void enumerate_degree(int nvars, int pos, int remaining, Monomial& cur, bool exact_degree,
                      std::vector<Monomial>& out) {
  if (pos == nvars - 1) {
    cur[pos] = remaining;
    out.push_back(cur);
    cur[pos] = 0;
    return;
  }
  for (int e = remaining; e >= 0; --e) {
    cur[pos] = e;
    enumerate_degree(nvars, pos + 1, remaining - e, cur, exact_degree, out);
  }
  cur[pos] = 0;
}
}  // namespace

std::vector<Monomial> monomial_basis(int nvars, int d, bool exact_degree) {
  std::vector<Monomial> out;
  if (nvars == 0) {
    if (!exact_degree || d == 0) out.push_back(Monomial{});
    return out;
  }
  Monomial cur(nvars, 0);
  for (int deg = exact_degree ? d : 0; deg <= d; ++deg)
    enumerate_degree(nvars, 0, deg, cur, exact_degree, out);
  return out;
}

}  // namespace polycert
