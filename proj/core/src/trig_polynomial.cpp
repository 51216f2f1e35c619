#include "kksampling/trig_polynomial.hpp"

#include <cmath>

#include "kksampling/errors.hpp"

namespace kks {

TrigPolynomial::TrigPolynomial(int dim) : dim_(dim) {
  if (dim <= 0 || dim > kMaxDim) throw InvalidArgument("trig polynomial dimension out of range");
}

TrigPolynomial::TrigPolynomial(int dim, CoefficientMap coeffs) : TrigPolynomial(dim) {
  for (auto& [l, a] : coeffs) {
    if (static_cast<int>(l.size()) != dim) throw InvalidArgument("lattice point has wrong dimension");
    add(l, a);
  }
}

TrigPolynomial TrigPolynomial::constant(int dim, cplx value) {
  TrigPolynomial t(dim);
  t.add(LatticePoint(static_cast<std::size_t>(dim), 0), value);
  return t;
}

TrigPolynomial TrigPolynomial::embed(const TrigPolynomial& one_dim, int axis, int dim) {
  if (one_dim.dim() != 1) throw InvalidArgument("embed expects a 1-D polynomial");
  if (axis < 0 || axis >= dim) throw InvalidArgument("embed axis out of range");
  TrigPolynomial t(dim);
  for (const auto& [l, a] : one_dim.coeffs_) {
    LatticePoint p(static_cast<std::size_t>(dim), 0);
    p[static_cast<std::size_t>(axis)] = l[0];
    t.add(p, a);
  }
  return t;
}

cplx TrigPolynomial::coefficient(const LatticePoint& l) const {
  auto it = coeffs_.find(l);
  return it == coeffs_.end() ? cplx{} : it->second;
}

void TrigPolynomial::add(const LatticePoint& l, cplx a) {
  if (static_cast<int>(l.size()) != dim_) throw InvalidArgument("lattice point has wrong dimension");
  auto [it, inserted] = coeffs_.try_emplace(l, a);
  if (!inserted) it->second += a;
}

cplx TrigPolynomial::operator()(const Vec& xi) const {
  cplx sum{};
  for (const auto& [l, a] : coeffs_) {
    double phase = 0.0;
    for (int i = 0; i < dim_; ++i) phase += l[static_cast<std::size_t>(i)] * xi[i];
    sum += a * std::polar(1.0, kTwoPi * phase);
  }
  return sum;
}

cplx TrigPolynomial::operator()(const CVec& xi) const {
  cplx sum{};
  const cplx two_pi_i(0.0, kTwoPi);
  for (const auto& [l, a] : coeffs_) {
    cplx phase{};
    for (int i = 0; i < dim_; ++i) phase += static_cast<double>(l[static_cast<std::size_t>(i)]) * xi[i];
    sum += a * std::exp(two_pi_i * phase);
  }
  return sum;
}

cplx TrigPolynomial::derivative_at_zero(const MultiIndex& alpha) const {
  if (static_cast<int>(alpha.size()) != dim_) throw InvalidArgument("multi-index has wrong dimension");
  cplx sum{};
  for (const auto& [l, a] : coeffs_) {
    cplx factor = a;
    for (int i = 0; i < dim_; ++i) {
      const cplx base(0.0, kTwoPi * l[static_cast<std::size_t>(i)]);
      for (int e = 0; e < alpha[static_cast<std::size_t>(i)]; ++e) factor *= base;
    }
    sum += factor;
  }
  return sum;
}

TrigPolynomial& TrigPolynomial::operator+=(const TrigPolynomial& other) {
  if (other.dim_ != dim_) throw InvalidArgument("dimension mismatch in trig polynomial sum");
  for (const auto& [l, a] : other.coeffs_) coeffs_[l] += a;
  return *this;
}

TrigPolynomial& TrigPolynomial::operator*=(cplx s) {
  for (auto& [l, a] : coeffs_) a *= s;
  return *this;
}

TrigPolynomial operator*(const TrigPolynomial& a, const TrigPolynomial& b) {
  if (a.dim_ != b.dim_) throw InvalidArgument("dimension mismatch in trig polynomial product");
  TrigPolynomial out(a.dim_);
  for (const auto& [la, ca] : a.coeffs_) {
    for (const auto& [lb, cb] : b.coeffs_) {
      LatticePoint l(la.size());
      for (std::size_t i = 0; i < la.size(); ++i) l[i] = la[i] + lb[i];
      out.coeffs_[l] += ca * cb;
    }
  }
  return out;
}

void TrigPolynomial::prune(double tol) {
  std::erase_if(coeffs_, [tol](const auto& kv) { return std::abs(kv.second) <= tol; });
}

double TrigPolynomial::max_imag() const {
  double m = 0.0;
  for (const auto& [l, a] : coeffs_) m = std::max(m, std::abs(a.imag()));
  return m;
}

nlohmann::json coefficients_to_json(const TrigPolynomial& t) {
  nlohmann::json rows = nlohmann::json::array();
  for (const auto& [l, a] : t.coefficients()) {
    nlohmann::json row = nlohmann::json::array();
    for (int v : l) row.push_back(v);
    row.push_back(a.real());
    row.push_back(a.imag());
    rows.push_back(std::move(row));
  }
  return rows;
}

TrigPolynomial coefficients_from_json(int dim, const nlohmann::json& rows) {
  TrigPolynomial t(dim);
  for (const auto& row : rows) {
    if (!row.is_array() || row.size() != static_cast<std::size_t>(dim) + 2)
      throw InvalidArgument("coefficient row must be [l_1, ..., l_d, re, im]");
    LatticePoint l(static_cast<std::size_t>(dim));
    for (int i = 0; i < dim; ++i) l[static_cast<std::size_t>(i)] = row[static_cast<std::size_t>(i)].get<int>();
    t.add(l, cplx(row[static_cast<std::size_t>(dim)].get<double>(),
                  row[static_cast<std::size_t>(dim) + 1].get<double>()));
  }
  return t;
}

}  // namespace kks
