#include "qcap/channel.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <fstream>

namespace qcap {

Channel Channel::from_kraus(std::vector<Matrix> kraus, double tp_tol) {
  if (kraus.empty()) throw ValidationError("Channel: Kraus list is empty");
  const Index d_out = kraus.front().rows();
  const Index d_in = kraus.front().cols();
  for (const Matrix& a : kraus)
    if (a.rows() != d_out || a.cols() != d_in)
      throw ValidationError("Channel: Kraus operators have mismatched shapes");
  Channel phi;
  phi.d_in = d_in;
  phi.d_out = d_out;
  phi.kraus = std::move(kraus);
  const double defect = phi.trace_preservation_defect();
  if (defect > tp_tol)
    throw ValidationError("Channel: trace preservation violated, |sum A^dag A - 1| = " +
                          std::to_string(defect));
  return phi;
}

double Channel::trace_preservation_defect() const {
  Matrix s = Matrix::Zero(d_in, d_in);
  for (const Matrix& a : kraus) s += a.adjoint() * a;
  return (s - Matrix::Identity(d_in, d_in)).cwiseAbs().maxCoeff();
}

Matrix Channel::apply(const Matrix& x) const {
  if (x.rows() != d_in || x.cols() != d_in)
    throw ValidationError("Channel::apply: input dimension mismatch");
  Matrix out = Matrix::Zero(d_out, d_out);
  for (const Matrix& a : kraus) out += a * x * a.adjoint();
  return out;
}

Matrix Channel::adjoint_apply(const Matrix& y) const {
  if (y.rows() != d_out || y.cols() != d_out)
    throw ValidationError("Channel::adjoint_apply: input dimension mismatch");
  Matrix out = Matrix::Zero(d_in, d_in);
  for (const Matrix& a : kraus) out += a.adjoint() * y * a;
  return out;
}

Matrix choi(const Channel& phi) {
  const Index d = phi.d_in;
  Matrix j = Matrix::Zero(phi.d_out * d, phi.d_out * d);
  // J = sum_a vec(A_a) vec(A_a)^dag with row-major vec.
  for (const Matrix& a : phi.kraus) {
    Vector va = vec(a);
    j += va * va.adjoint();
  }
  return j;
}

namespace {

bool lex_less(const Vector& a, const Vector& b) {
  for (Index i = 0; i < a.size(); ++i) {
    if (a(i).real() != b(i).real()) return a(i).real() < b(i).real();
    if (a(i).imag() != b(i).imag()) return a(i).imag() < b(i).imag();
  }
  return false;
}

}  // namespace

Channel channel_from_choi(Index d_in, Index d_out, const Matrix& j,
                          const ToleranceConfig& tol) {
  if (j.rows() != d_out * d_in || j.cols() != d_out * d_in)
    throw ValidationError("channel_from_choi: Choi matrix size mismatch");
  EigResult eig = hermitian_eig(j);
  const double top = eig.values(eig.values.size() - 1);
  if (eig.values(0) < -1e-8 * std::max(1.0, std::abs(top)))
    throw ValidationError("channel_from_choi: Choi matrix is not PSD within tolerance");
  const double threshold = std::max(tol.rank_rtol * std::max(top, 0.0), tol.rank_atol);

  std::vector<Index> keep;
  for (Index i = 0; i < eig.values.size(); ++i)
    if (eig.values(i) > threshold) keep.push_back(i);
  std::sort(keep.begin(), keep.end(), [&](Index a, Index b) {
    if (eig.values(a) != eig.values(b)) return eig.values(a) > eig.values(b);
    return lex_less(eig.vectors.col(a), eig.vectors.col(b));
  });

  std::vector<Matrix> kraus;
  kraus.reserve(keep.size());
  for (Index i : keep)
    kraus.push_back(std::sqrt(eig.values(i)) *
                    unvec(eig.vectors.col(i), d_out, d_in));
  return Channel::from_kraus(std::move(kraus));
}

Index minimal_env_dim(const Channel& phi, const ToleranceConfig& tol) {
  return numerical_rank(choi(phi), tol);
}

Index minimal_out_dim(const Channel& phi, const ToleranceConfig& tol) {
  Matrix mixed = Matrix::Identity(phi.d_in, phi.d_in) / double(phi.d_in);
  return numerical_rank(phi.apply(mixed), tol);
}

Matrix StinespringIsometry::apply_to_state(const Matrix& x) const {
  return v * x * v.adjoint();
}

StinespringIsometry stinespring(const Channel& phi, const ToleranceConfig& tol) {
  Channel minimal = channel_from_choi(phi.d_in, phi.d_out, choi(phi), tol);
  const Index k = Index(minimal.kraus.size());
  Matrix v = Matrix::Zero(phi.d_out * k, phi.d_in);
  for (Index a = 0; a < k; ++a)
    for (Index i = 0; i < phi.d_out; ++i) v.row(i * k + a) = minimal.kraus[size_t(a)].row(i);
  StinespringIsometry iso{phi.d_in, phi.d_out, k, std::move(v)};
  const double defect =
      (iso.v.adjoint() * iso.v - Matrix::Identity(phi.d_in, phi.d_in)).cwiseAbs().maxCoeff();
  if (defect > 1e-9)
    throw ValidationError("stinespring: V^dag V deviates from identity by " +
                          std::to_string(defect));
  return iso;
}

ComplementaryPair complement(const Channel& phi, const ToleranceConfig& tol) {
  Channel minimal = channel_from_choi(phi.d_in, phi.d_out, choi(phi), tol);
  const Index k = Index(minimal.kraus.size());
  const Index d = phi.d_in;

  StinespringIsometry iso{d, phi.d_out, k, Matrix::Zero(phi.d_out * k, d)};
  for (Index a = 0; a < k; ++a)
    for (Index i = 0; i < phi.d_out; ++i)
      iso.v.row(i * k + a) = minimal.kraus[size_t(a)].row(i);

  // [Phi_c(X)]_{ab} = Tr(B_b^dag B_a X) over the minimal Kraus set; the
  // complement channel itself is rebuilt from its own Choi matrix.
  Matrix jc = Matrix::Zero(k * d, k * d);
  for (Index i = 0; i < d; ++i) {
    for (Index j = 0; j < d; ++j) {
      Matrix x = Matrix::Zero(d, d);
      x(i, j) = 1.0;
      for (Index a = 0; a < k; ++a)
        for (Index b = 0; b < k; ++b) {
          Complex entry = (minimal.kraus[size_t(b)].adjoint() * minimal.kraus[size_t(a)] * x).trace();
          jc(a * d + i, b * d + j) += entry;
        }
    }
  }
  Channel comp = channel_from_choi(d, k, jc, tol);
  return {std::move(minimal), std::move(comp), std::move(iso)};
}

ComplementaryPair swapped(const ComplementaryPair& pair) {
  const Index d_out = pair.isometry.d_out;
  const Index d_env = pair.isometry.d_env;
  Matrix v(d_env * d_out, pair.isometry.d_in);
  for (Index i = 0; i < d_out; ++i)
    for (Index a = 0; a < d_env; ++a) v.row(a * d_out + i) = pair.isometry.v.row(i * d_env + a);
  return {pair.complement, pair.channel,
          StinespringIsometry{pair.isometry.d_in, d_env, d_out, std::move(v)}};
}

Channel tensor_power(const Channel& phi, int n) {
  if (n == 1) return phi;
  if (n != 2) throw ValidationError("tensor_power: only n in {1, 2} is supported");
  const Index dim_total = phi.d_in * phi.d_in * phi.d_out * phi.d_out;
  if (dim_total > 4096)
    throw ValidationError("tensor_power: total dimension exceeds the 4096 budget");
  std::vector<Matrix> kraus;
  kraus.reserve(phi.kraus.size() * phi.kraus.size());
  for (const Matrix& a : phi.kraus)
    for (const Matrix& b : phi.kraus) kraus.push_back(kron(a, b));
  return Channel::from_kraus(std::move(kraus));
}

ComplementaryPair tensor_square(const ComplementaryPair& pair, const ToleranceConfig& tol) {
  return complement(tensor_power(pair.channel, 2), tol);
}

Channel random_channel(Index d_in, Index d_out, Index d_env, Rng& rng) {
  if (d_out * d_env < d_in)
    throw ValidationError("random_channel: d_out*d_env must be at least d_in");
  Matrix v = haar_isometry(d_out * d_env, d_in, rng);
  std::vector<Matrix> kraus;
  kraus.reserve(size_t(d_env));
  for (Index a = 0; a < d_env; ++a) {
    Matrix ka(d_out, d_in);
    for (Index i = 0; i < d_out; ++i) ka.row(i) = v.row(i * d_env + a);
    kraus.push_back(std::move(ka));
  }
  return Channel::from_kraus(std::move(kraus));
}

Channel channel_from_json(const nlohmann::json& j) {
  if (!j.contains("d_in") || !j.contains("d_out") || !j.contains("kraus"))
    throw ValidationError("channel JSON: required keys are d_in, d_out, kraus");
  const Index d_in = j.at("d_in").get<Index>();
  const Index d_out = j.at("d_out").get<Index>();
  if (d_in < 1 || d_out < 1) throw ValidationError("channel JSON: dimensions must be positive");
  std::vector<Matrix> kraus;
  for (const auto& jk : j.at("kraus")) {
    if (Index(jk.size()) != d_out)
      throw ValidationError("channel JSON: Kraus operator has wrong row count");
    Matrix a(d_out, d_in);
    for (Index r = 0; r < d_out; ++r) {
      const auto& row = jk.at(size_t(r));
      if (Index(row.size()) != d_in)
        throw ValidationError("channel JSON: Kraus row has wrong length");
      for (Index c = 0; c < d_in; ++c) {
        const auto& entry = row.at(size_t(c));
        if (entry.size() != 2)
          throw ValidationError("channel JSON: entries must be [re, im] pairs");
        a(r, c) = Complex(entry.at(0).get<double>(), entry.at(1).get<double>());
      }
    }
    kraus.push_back(std::move(a));
  }
  return Channel::from_kraus(std::move(kraus));
}

nlohmann::json channel_to_json(const Channel& phi) {
  nlohmann::json j;
  j["d_in"] = phi.d_in;
  j["d_out"] = phi.d_out;
  nlohmann::json ops = nlohmann::json::array();
  for (const Matrix& a : phi.kraus) {
    nlohmann::json rows = nlohmann::json::array();
    for (Index r = 0; r < a.rows(); ++r) {
      nlohmann::json row = nlohmann::json::array();
      for (Index c = 0; c < a.cols(); ++c)
        row.push_back({a(r, c).real(), a(r, c).imag()});
      rows.push_back(std::move(row));
    }
    ops.push_back(std::move(rows));
  }
  j["kraus"] = std::move(ops);
  return j;
}

Channel load_channel_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open channel file: " + path);
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError("channel file " + path + ": " + e.what());
  }
  return channel_from_json(j);
}

}  // namespace qcap
