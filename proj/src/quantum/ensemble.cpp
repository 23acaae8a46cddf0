#include "locc/quantum/ensemble.hpp"

#include <cmath>
#include <sstream>

#include "locc/error.hpp"
#include "locc/numerics/eigen.hpp"

namespace locc {
namespace {

bool looks_normalized(const std::vector<EnsembleMember>& members) {
  double total = 0.0;
  for (const EnsembleMember& m : members) {
    total += m.weight;
    if (m.weight > 0.0 && std::abs(m.state.trace().real() - 1.0) > 1e-9) return false;
  }
  return std::abs(total - 1.0) <= 1e-10;
}

}  // namespace

Ensemble Ensemble::make(MultipartiteSpace space, std::vector<EnsembleMember> members) {
  Ensemble s{std::move(space), std::move(members), false};
  s.normalized = looks_normalized(s.members);
  return s;
}

double Ensemble::probability() const {
  double q = 0.0;
  for (const EnsembleMember& m : members) q += m.weight * m.state.trace().real();
  return q;
}

std::vector<std::string> validate_ensemble(const Ensemble& s) {
  std::vector<std::string> problems;
  const std::size_t d = s.space.total_dim();
  double total = 0.0;
  for (std::size_t k = 0; k < s.members.size(); ++k) {
    const EnsembleMember& m = s.members[k];
    const std::string tag = "member " + std::to_string(k) + ": ";
    if (!(m.weight >= 0.0)) problems.push_back(tag + "negative weight");
    total += m.weight;
    if (m.state.rows() != d || m.state.cols() != d) {
      problems.push_back(tag + "state does not match the space dimension");
      continue;
    }
    if (!is_hermitian(m.state)) {
      problems.push_back(tag + "state is not Hermitian");
      continue;
    }
    if (min_eigenvalue(m.state) < -1e-9) problems.push_back(tag + "state is not PSD");
    if (s.normalized && m.weight > 0.0 && std::abs(m.state.trace().real() - 1.0) > 1e-9) {
      problems.push_back(tag + "state trace differs from 1");
    }
  }
  if (s.normalized && std::abs(total - 1.0) > 1e-10) {
    std::ostringstream msg;
    msg << "weights sum to " << total << " in an ensemble flagged normalized";
    problems.push_back(msg.str());
  }
  if (!s.normalized && total > 1.0 + 1e-10) problems.push_back("weights sum above 1");
  return problems;
}

NormalizedEnsemble normalize(const Ensemble& s) {
  const double q = s.probability();
  if (!(q > 0.0)) throw Error(ErrorCode::InvalidInput, "cannot normalize an ensemble of probability 0");
  const std::size_t d = s.space.total_dim();
  std::vector<EnsembleMember> members;
  members.reserve(s.members.size());
  for (const EnsembleMember& m : s.members) {
    const double tr = m.state.trace().real();
    if (m.weight * tr > 0.0) {
      members.push_back({m.weight * tr / q, (1.0 / tr) * m.state});
    } else {
      members.push_back({0.0, (1.0 / static_cast<double>(d)) * ComplexMatrix::identity(d)});
    }
  }
  Ensemble out{s.space, std::move(members), true};
  return {q, std::move(out)};
}

}  // namespace locc
