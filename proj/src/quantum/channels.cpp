#include "locc/quantum/channels.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "locc/error.hpp"
#include "locc/numerics/eigen.hpp"

namespace locc {

CpMap CpMap::identity(std::size_t d) { return {d, d, {ComplexMatrix::identity(d)}}; }

CpMap CpMap::single(ComplexMatrix k) {
  const std::size_t in = k.cols(), out = k.rows();
  return {in, out, {std::move(k)}};
}

void CpMap::check_shapes() const {
  for (const ComplexMatrix& k : kraus) {
    if (k.rows() != out_dim || k.cols() != in_dim) {
      std::ostringstream msg;
      msg << "Kraus operator " << k.rows() << "x" << k.cols() << " in a " << in_dim << "->"
          << out_dim << " map";
      throw Error(ErrorCode::DimensionMismatch, msg.str());
    }
  }
}

ComplexMatrix CpMap::apply(const ComplexMatrix& rho) const {
  ComplexMatrix out(out_dim, out_dim);
  for (const ComplexMatrix& k : kraus) out += sandwich(k, rho);
  return out;
}

ComplexMatrix CpMap::effect() const {
  ComplexMatrix e(in_dim, in_dim);
  for (const ComplexMatrix& k : kraus) e += adjoint_times(k, k);
  return e;
}

CpMap scaled(const CpMap& map, double c) {
  if (c < 0.0) throw Error(ErrorCode::InvalidInput, "CP maps can only be scaled by c >= 0");
  CpMap out = map;
  const double r = std::sqrt(c);
  for (ComplexMatrix& k : out.kraus) k *= r;
  return out;
}

CpMap kraus_union(const CpMap& a, const CpMap& b) {
  if (a.in_dim != b.in_dim || a.out_dim != b.out_dim) {
    throw Error(ErrorCode::DimensionMismatch, "summing CP maps of different shapes");
  }
  CpMap out = a;
  out.kraus.insert(out.kraus.end(), b.kraus.begin(), b.kraus.end());
  return out;
}

CpMap compose(const CpMap& after, const CpMap& before) {
  if (after.in_dim != before.out_dim) throw Error(ErrorCode::DimensionMismatch, "composition shape");
  CpMap out{before.in_dim, after.out_dim, {}};
  out.kraus.reserve(after.kraus.size() * before.kraus.size());
  for (const ComplexMatrix& ka : after.kraus)
    for (const ComplexMatrix& kb : before.kraus) out.kraus.push_back(ka * kb);
  return out;
}

PovmCheck validate_povm(const Povm& p, double tol) {
  PovmCheck check;
  ComplexMatrix sum(p.dim, p.dim);
  check.min_eigenvalue = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < p.elements.size(); ++i) {
    const ComplexMatrix& e = p.elements[i];
    if (e.rows() != p.dim || e.cols() != p.dim) {
      check.problems.push_back("element " + std::to_string(i) + " has wrong shape");
      continue;
    }
    if (!is_hermitian(e)) {
      check.problems.push_back("element " + std::to_string(i) + " is not Hermitian");
      continue;
    }
    const double lo = min_eigenvalue(e);
    check.min_eigenvalue = std::min(check.min_eigenvalue, lo);
    if (lo < -1e-9) check.problems.push_back("element " + std::to_string(i) + " is not PSD");
    sum += e;
  }
  check.completeness_residual = frobenius_distance(sum, ComplexMatrix::identity(p.dim));
  if (check.completeness_residual > tol) {
    std::ostringstream msg;
    msg << "elements sum to I only within " << check.completeness_residual;
    check.problems.push_back(msg.str());
  }
  check.ok = check.problems.empty();
  return check;
}

double Instrument::completeness_residual() const {
  ComplexMatrix sum(in_dim, in_dim);
  for (const InstrumentBranch& b : branches) sum += b.map.effect();
  return frobenius_distance(sum, ComplexMatrix::identity(in_dim));
}

const InstrumentBranch* Instrument::find(int label) const {
  const auto it = std::find_if(branches.begin(), branches.end(),
                               [label](const InstrumentBranch& b) { return b.label == label; });
  return it == branches.end() ? nullptr : &*it;
}

ChoiMatrix choi_of(const CpMap& map) {
  map.check_shapes();
  const std::size_t in = map.in_dim, out = map.out_dim;
  ChoiMatrix c{in, out, ComplexMatrix(in * out, in * out)};
  // C = Σ_k |v_k⟩⟨v_k| with v_k[i·out + a] = K_k(a, i).
  std::vector<cplx> v(in * out);
  for (const ComplexMatrix& k : map.kraus) {
    for (std::size_t i = 0; i < in; ++i)
      for (std::size_t a = 0; a < out; ++a) v[i * out + a] = k(a, i);
    for (std::size_t r = 0; r < v.size(); ++r) {
      if (v[r] == cplx{}) continue;
      for (std::size_t s = 0; s < v.size(); ++s) c.matrix(r, s) += v[r] * std::conj(v[s]);
    }
  }
  return c;
}

CpMap map_of_choi(const ChoiMatrix& c, double kraus_tol) {
  const std::size_t in = c.in_dim, out = c.out_dim;
  if (c.matrix.rows() != in * out || c.matrix.cols() != in * out) {
    throw Error(ErrorCode::DimensionMismatch, "Choi matrix size does not match in_dim*out_dim");
  }
  const HermitianEigen eig = hermitian_eig(c.matrix);
  const double top = eig.eigenvalues.empty() ? 0.0 : std::max(0.0, eig.eigenvalues.back());
  if (!eig.eigenvalues.empty() && eig.eigenvalues.front() < -1e-8 * std::max(1.0, top)) {
    throw Error(ErrorCode::NotPsd, "Choi matrix has a negative eigenvalue");
  }
  CpMap map{in, out, {}};
  for (std::size_t j = eig.eigenvalues.size(); j-- > 0;) {
    const double l = eig.eigenvalues[j];
    if (top <= 0.0 || l <= kraus_tol * top) break;
    const double r = std::sqrt(l);
    ComplexMatrix k(out, in);
    for (std::size_t i = 0; i < in; ++i)
      for (std::size_t a = 0; a < out; ++a) k(a, i) = r * eig.eigenvectors(i * out + a, j);
    map.kraus.push_back(std::move(k));
  }
  return map;
}

KrausPolar canonicalize_kraus(const ComplexMatrix& a) {
  const ComplexMatrix gram = adjoint_times(a, a);
  const SupportInverseSqrt inv = inv_sqrt_on_support(gram);
  return {sqrt_psd(gram), a * inv.pinv_sqrt};
}

}  // namespace locc
