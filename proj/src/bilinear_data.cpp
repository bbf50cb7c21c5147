#include "fermi/bilinear_data.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>

#include "fermi/errors.hpp"

namespace fermi {

namespace {

std::string fmt_pair(std::size_t i, std::size_t j) {
  std::ostringstream os;
  os << "(" << i << "," << j << ")";
  return os.str();
}

}  // namespace

BilinearData::BilinearData(std::vector<int> labels, Eigen::MatrixXcd w, Eigen::MatrixXd e,
                           double tolerance)
    : labels_(std::move(labels)), w_(std::move(w)), e_(std::move(e)) {
  const auto n = static_cast<Eigen::Index>(labels_.size());
  if (w_.rows() != n || w_.cols() != n || e_.rows() != n || e_.cols() != n)
    throw DomainError("bilinear data: W and E must be square with one row per label");
  if (std::set<int>(labels_.begin(), labels_.end()).size() != labels_.size())
    throw DomainError("bilinear data: duplicate smearing labels");
  if (!w_.allFinite() || !e_.allFinite())
    throw DomainError("bilinear data: non-finite entries");

  const double scale = std::max(1.0, n > 0 ? w_.cwiseAbs().maxCoeff() : 0.0);
  const double tol = tolerance * scale;

  for (Eigen::Index i = 0; i < n; ++i) {
    if (std::abs(e_(i, i)) > tol)
      throw DomainError("bilinear data: E(f,f) must vanish at " + fmt_pair(i, i));
    for (Eigen::Index j = 0; j < n; ++j) {
      if (std::abs(w_(i, j) - std::conj(w_(j, i))) > tol)
        throw DomainError("bilinear data: W not Hermitian at " + fmt_pair(i, j));
      if (std::abs(e_(i, j) + e_(j, i)) > tol)
        throw DomainError("bilinear data: E not antisymmetric at " + fmt_pair(i, j));
      if (std::abs(e_(i, j) - 2.0 * w_(i, j).imag()) > tol)
        throw DomainError("bilinear data: E != 2 Im W at " + fmt_pair(i, j));
    }
  }

  // Store exactly Hermitian / antisymmetric copies taken from the upper triangle.
  for (Eigen::Index i = 0; i < n; ++i) {
    w_(i, i) = Complex(w_(i, i).real(), 0.0);
    e_(i, i) = 0.0;
    for (Eigen::Index j = i + 1; j < n; ++j) {
      w_(j, i) = std::conj(w_(i, j));
      e_(j, i) = -e_(i, j);
    }
  }

  if (n > 0) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(w_.real(), Eigen::EigenvaluesOnly);
    if (es.eigenvalues().minCoeff() < -tol)
      throw DomainError("bilinear data: Re W is not positive semidefinite (min eigenvalue " +
                        std::to_string(es.eigenvalues().minCoeff()) + ")");
  }
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j)
      if (e_(i, j) * e_(i, j) > 4.0 * w_(i, i).real() * w_(j, j).real() + tol)
        throw DomainError("bilinear data: |E_ij|^2 <= 4 Re W_ii Re W_jj violated at " +
                          fmt_pair(i, j));
}

BilinearData BilinearData::from_wightman(std::vector<int> labels, Eigen::MatrixXcd w,
                                         double tolerance) {
  Eigen::MatrixXd e = 2.0 * w.imag();
  return BilinearData(std::move(labels), std::move(w), std::move(e), tolerance);
}

bool BilinearData::contains(SmearingIndex j) const {
  return std::find(labels_.begin(), labels_.end(), j.id) != labels_.end();
}

std::size_t BilinearData::index_of(SmearingIndex j) const {
  auto it = std::find(labels_.begin(), labels_.end(), j.id);
  if (it == labels_.end()) throw UnregisteredSmearing(j.id);
  return static_cast<std::size_t>(it - labels_.begin());
}

Complex BilinearData::w(SmearingIndex i, SmearingIndex j) const {
  return w_(static_cast<Eigen::Index>(index_of(i)), static_cast<Eigen::Index>(index_of(j)));
}

double BilinearData::e(SmearingIndex i, SmearingIndex j) const {
  return e_(static_cast<Eigen::Index>(index_of(i)), static_cast<Eigen::Index>(index_of(j)));
}

std::vector<int> BilinearData::dense(const CombinedSmearing& h) const {
  std::vector<int> n(labels_.size(), 0);
  for (const auto& entry : h.entries()) n[index_of(SmearingIndex{entry.id})] = entry.n;
  return n;
}

double BilinearData::causal(const CombinedSmearing& h1, const CombinedSmearing& h2) const {
  const auto n = dense(h1);
  const auto m = dense(h2);
  double sum = 0.0;
  const auto size = n.size();
  for (std::size_t i = 0; i < size; ++i)
    for (std::size_t j = i + 1; j < size; ++j) {
      const int c = n[i] * m[j] - n[j] * m[i];
      if (c != 0)
        sum += static_cast<double>(c) *
               e_(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
    }
  return sum;
}

Complex BilinearData::wightman(const CombinedSmearing& h1, const CombinedSmearing& h2) const {
  const auto n = dense(h1);
  const auto m = dense(h2);
  Complex sum = 0.0;
  for (std::size_t i = 0; i < n.size(); ++i) {
    if (n[i] == 0) continue;
    for (std::size_t j = 0; j < m.size(); ++j)
      if (m[j] != 0)
        sum += static_cast<double>(n[i] * m[j]) *
               w_(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
  }
  return sum;
}

double BilinearData::symmetric_norm(const CombinedSmearing& h) const {
  return wightman(h, h).real();
}

nlohmann::json BilinearData::to_json() const {
  nlohmann::json j;
  j["labels"] = labels_;
  auto& w = j["W"] = nlohmann::json::array();
  auto& e = j["E"] = nlohmann::json::array();
  for (Eigen::Index r = 0; r < w_.rows(); ++r) {
    nlohmann::json wrow = nlohmann::json::array();
    nlohmann::json erow = nlohmann::json::array();
    for (Eigen::Index c = 0; c < w_.cols(); ++c) {
      wrow.push_back({w_(r, c).real(), w_(r, c).imag()});
      erow.push_back(e_(r, c));
    }
    w.push_back(std::move(wrow));
    e.push_back(std::move(erow));
  }
  return j;
}

BilinearData BilinearData::from_json(const nlohmann::json& j, double tolerance) {
  try {
    auto labels = j.at("labels").get<std::vector<int>>();
    const auto n = static_cast<Eigen::Index>(labels.size());
    const auto& wj = j.at("W");
    const auto& ej = j.at("E");
    if (static_cast<Eigen::Index>(wj.size()) != n || static_cast<Eigen::Index>(ej.size()) != n)
      throw DomainError("bilinear data json: W/E row count does not match labels");
    Eigen::MatrixXcd w(n, n);
    Eigen::MatrixXd e(n, n);
    for (Eigen::Index r = 0; r < n; ++r) {
      if (static_cast<Eigen::Index>(wj[r].size()) != n ||
          static_cast<Eigen::Index>(ej[r].size()) != n)
        throw DomainError("bilinear data json: ragged row " + std::to_string(r));
      for (Eigen::Index c = 0; c < n; ++c) {
        const auto& cell = wj[r][c];
        if (!cell.is_array() || cell.size() != 2)
          throw DomainError("bilinear data json: W entries must be [re, im]");
        w(r, c) = Complex(cell[0].get<double>(), cell[1].get<double>());
        e(r, c) = ej[r][c].get<double>();
      }
    }
    return BilinearData(std::move(labels), std::move(w), std::move(e), tolerance);
  } catch (const nlohmann::json::exception& ex) {
    throw DomainError(std::string("bilinear data json: ") + ex.what());
  }
}

}  // namespace fermi
