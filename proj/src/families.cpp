#include "qcap/families.hpp"

#include <nlohmann/json.hpp>

#include <cmath>
#include <numbers>
#include <sstream>

namespace qcap {

namespace {

constexpr double kZeroTol = 1e-10;  // "= 0" / "= 1" structure tests

void require_dim(Index d) {
  if (d < 1) throw ValidationError("family constructor: dimension must be positive");
}

}  // namespace

Channel make_depolarizing(Index d, double p, const ToleranceConfig& tol) {
  require_dim(d);
  const double p_max = double(d * d) / double(d * d - 1);
  if (!(p >= 0.0 && p <= p_max))
    throw ValidationError("depolarizing: p outside [0, d^2/(d^2-1)]");
  Matrix j = (p / double(d)) * Matrix::Identity(d * d, d * d);
  for (Index i = 0; i < d; ++i)
    for (Index k = 0; k < d; ++k) j(i * d + i, k * d + k) += 1.0 - p;
  return channel_from_choi(d, d, j, tol);
}

Channel make_transpose_depolarizing(Index d, double q, const ToleranceConfig& tol) {
  require_dim(d);
  if (d < 2) throw ValidationError("transpose depolarizing: d must be at least 2");
  const double q_min = double(d) / double(d + 1);
  const double q_max = double(d) / double(d - 1);
  if (!(q >= q_min && q <= q_max))
    throw ValidationError("transpose depolarizing: q outside [d/(d+1), d/(d-1)]");
  Matrix j = (q / double(d)) * Matrix::Identity(d * d, d * d);
  for (Index i = 0; i < d; ++i)
    for (Index k = 0; k < d; ++k) j(k * d + i, i * d + k) += 1.0 - q;
  return channel_from_choi(d, d, j, tol);
}

Channel make_werner_holevo(Index d, const ToleranceConfig& tol) {
  if (d < 2) throw ValidationError("werner-holevo: d must be at least 2");
  return make_transpose_depolarizing(d, double(d) / double(d - 1), tol);
}

Matrix shift_matrix(Index d) {
  Matrix x = Matrix::Zero(d, d);
  for (Index k = 0; k < d; ++k) x((k + 1) % d, k) = 1.0;
  return x;
}

Matrix clock_matrix(Index d) {
  Matrix z = Matrix::Zero(d, d);
  const double theta = 2.0 * std::numbers::pi / double(d);
  for (Index k = 0; k < d; ++k) z(k, k) = std::polar(1.0, theta * double(k));
  return z;
}

Channel make_pauli(Index d, const RealMatrix& prob) {
  require_dim(d);
  if (prob.rows() != d || prob.cols() != d)
    throw ValidationError("pauli: probability matrix must be d x d");
  double total = 0.0;
  for (Index i = 0; i < d; ++i)
    for (Index j = 0; j < d; ++j) {
      if (prob(i, j) < 0.0) throw ValidationError("pauli: negative probability entry");
      total += prob(i, j);
    }
  if (std::abs(total - 1.0) > 1e-9)
    throw ValidationError("pauli: probabilities must sum to one");
  const Matrix x = shift_matrix(d);
  const Matrix z = clock_matrix(d);
  std::vector<Matrix> kraus;
  Matrix xi = Matrix::Identity(d, d);
  for (Index i = 0; i < d; ++i) {
    Matrix u = xi;
    for (Index j = 0; j < d; ++j) {
      if (prob(i, j) > 0.0) kraus.push_back(std::sqrt(prob(i, j)) * u);
      u = u * z;
    }
    xi = x * xi;
  }
  return Channel::from_kraus(std::move(kraus));
}

namespace {

void validate_mad(Index d, const RealMatrix& decay) {
  require_dim(d);
  if (decay.rows() != d || decay.cols() != d)
    throw ValidationError("mad: decay matrix must be d x d");
  for (Index j = 0; j < d; ++j) {
    double outgoing = 0.0;
    for (Index i = 0; i < d; ++i) {
      if (i < j) {
        if (decay(j, i) < 0.0) throw ValidationError("mad: negative decay rate");
        outgoing += decay(j, i);
      } else if (std::abs(decay(j, i)) > 0.0) {
        throw ValidationError("mad: decay rates only allowed from higher to lower levels");
      }
    }
    if (outgoing > 1.0 + 1e-12)
      throw ValidationError("mad: outgoing rates of a level exceed one");
  }
}

double mad_outgoing(const RealMatrix& decay, Index j) {
  double s = 0.0;
  for (Index i = 0; i < j; ++i) s += decay(j, i);
  return s;
}

}  // namespace

Channel make_mad(Index d, const RealMatrix& decay) {
  validate_mad(d, decay);
  Matrix a0 = Matrix::Zero(d, d);
  a0(0, 0) = 1.0;
  for (Index j = 1; j < d; ++j) a0(j, j) = std::sqrt(1.0 - mad_outgoing(decay, j));
  std::vector<Matrix> kraus{a0};
  for (Index j = 1; j < d; ++j)
    for (Index i = 0; i < j; ++i) {
      if (decay(j, i) > kZeroTol) {
        Matrix aij = Matrix::Zero(d, d);
        aij(i, j) = std::sqrt(decay(j, i));
        kraus.push_back(std::move(aij));
      }
    }
  return Channel::from_kraus(std::move(kraus));
}

std::vector<Index> mad_depleted_levels(Index d, const RealMatrix& decay) {
  validate_mad(d, decay);
  std::vector<Index> depleted;
  for (Index j = 1; j < d; ++j) {
    bool no_incoming = true;
    for (Index k = j + 1; k < d; ++k)
      if (decay(k, j) > kZeroTol) no_incoming = false;
    if (no_incoming && std::abs(mad_outgoing(decay, j) - 1.0) <= kZeroTol)
      depleted.push_back(j);
  }
  return depleted;
}

Index mad_n1(Index d, const RealMatrix& decay) {
  return d - Index(mad_depleted_levels(d, decay).size());
}

Index mad_n2(Index d, const RealMatrix& decay) {
  validate_mad(d, decay);
  Index n = 0;
  for (Index j = 1; j < d; ++j)
    for (Index i = 0; i < j; ++i)
      if (decay(j, i) > kZeroTol) ++n;
  return n;
}

namespace {

void validate_duc_common(const RealMatrix& a, const Matrix& b) {
  const Index d = a.rows();
  if (a.cols() != d || b.rows() != d || b.cols() != d)
    throw ValidationError("(c)duc: A and B must be square with equal size");
  for (Index i = 0; i < d; ++i)
    for (Index j = 0; j < d; ++j)
      if (a(i, j) < 0.0)
        throw ValidationError("(c)duc: A(" + std::to_string(i) + "," + std::to_string(j) +
                              ") is negative");
  for (Index j = 0; j < d; ++j)
    if (std::abs(a.col(j).sum() - 1.0) > 1e-9)
      throw ValidationError("(c)duc: column " + std::to_string(j) +
                            " of A does not sum to one (trace preservation)");
  for (Index i = 0; i < d; ++i)
    if (std::abs(b(i, i) - Complex(a(i, i), 0.0)) > kZeroTol)
      throw ValidationError("(c)duc: diag(A) and diag(B) differ at index " + std::to_string(i));
}

}  // namespace

Channel make_duc(const RealMatrix& a, const Matrix& b, const ToleranceConfig& tol) {
  validate_duc_common(a, b);
  const Index d = a.rows();
  for (Index i = 0; i < d; ++i)
    for (Index j = 0; j < d; ++j) {
      if (std::abs(b(i, j) - std::conj(b(j, i))) > 1e-10)
        throw ValidationError("duc: B is not Hermitian at (" + std::to_string(i) + "," +
                              std::to_string(j) + ")");
      if (i < j && a(i, j) * a(j, i) + 1e-12 < std::norm(b(i, j)))
        throw ValidationError("duc: A_ij A_ji >= |B_ij|^2 violated at (" + std::to_string(i) +
                              "," + std::to_string(j) + ")");
    }
  Matrix jmat = Matrix::Zero(d * d, d * d);
  for (Index i = 0; i < d; ++i)
    for (Index k = 0; k < d; ++k) jmat(i * d + k, i * d + k) = a(i, k);
  for (Index k = 0; k < d; ++k)
    for (Index l = 0; l < d; ++l)
      if (k != l) jmat(l * d + k, k * d + l) = b(l, k);
  return channel_from_choi(d, d, jmat, tol);
}

Channel make_cduc(const RealMatrix& a, const Matrix& b, const ToleranceConfig& tol) {
  validate_duc_common(a, b);
  const Index d = a.rows();
  require_hermitian(b);
  {
    Eigen::SelfAdjointEigenSolver<Matrix> es(0.5 * (b + b.adjoint()), Eigen::EigenvaluesOnly);
    if (es.eigenvalues().minCoeff() < -1e-10 * std::max(1.0, es.eigenvalues().cwiseAbs().maxCoeff()))
      throw ValidationError("cduc: B is not positive semi-definite (min eigenvalue " +
                            std::to_string(es.eigenvalues().minCoeff()) + ")");
  }
  Matrix jmat = Matrix::Zero(d * d, d * d);
  for (Index i = 0; i < d; ++i)
    for (Index k = 0; k < d; ++k)
      if (i != k) jmat(i * d + k, i * d + k) = a(i, k);
  for (Index k = 0; k < d; ++k)
    for (Index l = 0; l < d; ++l) jmat(k * d + k, l * d + l) = b(k, l);
  return channel_from_choi(d, d, jmat, tol);
}

namespace {

Index nonzero_row_count(const RealMatrix& a) {
  Index n = 0;
  for (Index i = 0; i < a.rows(); ++i)
    if (a.row(i).cwiseAbs().maxCoeff() > kZeroTol) ++n;
  return n;
}

}  // namespace

std::pair<Index, Index> duc_min_dims(const RealMatrix& a, const Matrix& b,
                                     const ToleranceConfig& tol) {
  const Index d = a.rows();
  Index env = 0;
  for (Index i = 0; i < d; ++i)
    if (a(i, i) > kZeroTol) ++env;
  for (Index i = 0; i < d; ++i)
    for (Index j = i + 1; j < d; ++j) {
      Matrix block(2, 2);
      block << Complex(a(i, j), 0), b(i, j), b(j, i), Complex(a(j, i), 0);
      env += numerical_rank(block, tol);
    }
  return {nonzero_row_count(a), env};
}

std::pair<Index, Index> cduc_min_dims(const RealMatrix& a, const Matrix& b,
                                      const ToleranceConfig& tol) {
  const Index d = a.rows();
  Index env = numerical_rank(b, tol);
  for (Index i = 0; i < d; ++i)
    for (Index j = 0; j < d; ++j)
      if (i != j && a(i, j) > kZeroTol) ++env;
  return {nonzero_row_count(a), env};
}

Channel make_dephasing(Index d, const Matrix& corr, const ToleranceConfig& tol) {
  require_dim(d);
  if (corr.rows() != d || corr.cols() != d)
    throw ValidationError("dephasing: B must be d x d");
  for (Index i = 0; i < d; ++i)
    if (std::abs(corr(i, i) - 1.0) > kZeroTol)
      throw ValidationError("dephasing: B must have unit diagonal");
  return make_cduc(RealMatrix::Identity(d, d), corr, tol);
}

ComplementaryPair make_unitary_dilation(Index d, const Matrix& v, const ToleranceConfig& tol) {
  require_dim(d);
  const Index dd = d * d;
  if (v.rows() != dd || v.cols() != dd)
    throw ValidationError("unitary dilation: V must be d^2 x d^2");
  const double defect =
      (v.adjoint() * v - Matrix::Identity(dd, dd)).cwiseAbs().maxCoeff();
  if (defect > 1e-9)
    throw ValidationError("unitary dilation: V is not unitary, defect " + std::to_string(defect));
  std::vector<Matrix> kraus;
  for (Index a = 0; a < d; ++a) {
    Matrix ka(d, dd);
    for (Index i = 0; i < d; ++i) ka.row(i) = v.row(i * d + a);
    kraus.push_back(std::move(ka));
  }
  return complement(Channel::from_kraus(std::move(kraus)), tol);
}

std::string family_name(Family f) {
  switch (f) {
    case Family::depolarizing: return "depolarizing";
    case Family::transpose_depolarizing: return "transpose-depolarizing";
    case Family::werner_holevo: return "werner-holevo";
    case Family::pauli: return "pauli";
    case Family::mad: return "mad";
    case Family::duc: return "duc";
    case Family::cduc: return "cduc";
    case Family::dephasing: return "dephasing";
    case Family::unitary_dilation: return "unitary-dilation";
  }
  throw std::logic_error("family_name: unknown family");
}

Family family_from_name(const std::string& name) {
  for (int k = 0; k <= int(Family::unitary_dilation); ++k)
    if (family_name(Family(k)) == name) return Family(k);
  // Accept underscores as separators too.
  std::string dashed = name;
  for (char& c : dashed)
    if (c == '_') c = '-';
  for (int k = 0; k <= int(Family::unitary_dilation); ++k)
    if (family_name(Family(k)) == dashed) return Family(k);
  throw ValidationError("unknown family name: " + name);
}

ComplementaryPair build_pair(const FamilySpec& spec, const ToleranceConfig& tol) {
  const Index d = spec.d;
  return std::visit(
      [&](const auto& p) -> ComplementaryPair {
        using T = std::decay_t<decltype(p)>;
        if constexpr (std::is_same_v<T, DepolarizingParams>)
          return complement(make_depolarizing(d, p.p, tol), tol);
        else if constexpr (std::is_same_v<T, TransposeDepolarizingParams>)
          return complement(make_transpose_depolarizing(d, p.q, tol), tol);
        else if constexpr (std::is_same_v<T, WernerHolevoParams>)
          return complement(make_werner_holevo(d, tol), tol);
        else if constexpr (std::is_same_v<T, PauliParams>)
          return complement(make_pauli(d, p.prob), tol);
        else if constexpr (std::is_same_v<T, MadParams>)
          return complement(make_mad(d, p.decay), tol);
        else if constexpr (std::is_same_v<T, DucParams>)
          return complement(make_duc(p.a, p.b, tol), tol);
        else if constexpr (std::is_same_v<T, CducParams>)
          return complement(make_cduc(p.a, p.b, tol), tol);
        else if constexpr (std::is_same_v<T, DephasingParams>)
          return complement(make_dephasing(d, p.corr, tol), tol);
        else
          return make_unitary_dilation(d, p.v, tol);
      },
      spec.params);
}

namespace {

void append_unique(std::vector<LabeledState>& states, LabeledState s) {
  for (const LabeledState& t : states)
    if (t.label == s.label) return;
  states.push_back(std::move(s));
}

void append_basis_and_uniform(std::vector<LabeledState>& states, Index d) {
  for (Index k = 0; k < d; ++k)
    append_unique(states, {"basis_" + std::to_string(k), basis_state(d, k)});
  append_unique(states, {"uniform", uniform_superposition(d)});
}

std::vector<LabeledState> fourier_states(Index d) {
  std::vector<LabeledState> out;
  const double theta = 2.0 * std::numbers::pi / double(d);
  for (Index k = 0; k < d; ++k) {
    Vector f(d);
    for (Index j = 0; j < d; ++j) f(j) = std::polar(1.0 / std::sqrt(double(d)), theta * double(j * k));
    out.push_back({"fourier_" + std::to_string(k), std::move(f)});
  }
  return out;
}

}  // namespace

std::vector<LabeledState> default_witness_states(Index d) {
  std::vector<LabeledState> states;
  append_basis_and_uniform(states, d);
  return states;
}

std::vector<LabeledState> canonical_witness_states(const FamilySpec& spec) {
  std::vector<LabeledState> states;
  const Index d = spec.d;
  switch (spec.family()) {
    case Family::werner_holevo:
      append_unique(states, {"basis_0", basis_state(d, 0)});
      break;
    case Family::pauli: {
      // Clock eigenvectors are the standard basis; shift eigenvectors the
      // Fourier basis.
      for (Index k = 0; k < d; ++k)
        append_unique(states, {"basis_" + std::to_string(k), basis_state(d, k)});
      for (auto& f : fourier_states(d)) append_unique(states, std::move(f));
      break;
    }
    case Family::mad:
    case Family::duc:
    case Family::cduc:
      append_unique(states, {"uniform", uniform_superposition(d)});
      break;
    case Family::dephasing:
      for (Index k = 0; k < d; ++k)
        append_unique(states, {"basis_" + std::to_string(k), basis_state(d, k)});
      append_unique(states, {"uniform", uniform_superposition(d)});
      break;
    case Family::unitary_dilation: {
      const auto& v = std::get<UnitaryDilationParams>(spec.params).v;
      for (Index i = 0; i < d; ++i)
        for (Index j = 0; j < d; ++j) {
          Vector psi = v.adjoint() * kron(basis_state(d, i), basis_state(d, j));
          append_unique(states,
                        {"dilation_" + std::to_string(i) + "_" + std::to_string(j), std::move(psi)});
        }
      break;
    }
    default:
      break;
  }
  const Index input_dim = spec.family() == Family::unitary_dilation ? d * d : d;
  append_basis_and_uniform(states, input_dim);
  return states;
}

namespace {

RealMatrix parse_real_matrix(const nlohmann::json& j, Index rows, Index cols,
                             const char* what) {
  if (Index(j.size()) != rows) throw ValidationError(std::string(what) + ": wrong row count");
  RealMatrix m(rows, cols);
  for (Index r = 0; r < rows; ++r) {
    const auto& row = j.at(size_t(r));
    if (Index(row.size()) != cols) throw ValidationError(std::string(what) + ": wrong row length");
    for (Index c = 0; c < cols; ++c) m(r, c) = row.at(size_t(c)).get<double>();
  }
  return m;
}

Matrix parse_complex_matrix(const nlohmann::json& j, Index rows, Index cols,
                            const char* what) {
  if (Index(j.size()) != rows) throw ValidationError(std::string(what) + ": wrong row count");
  Matrix m(rows, cols);
  for (Index r = 0; r < rows; ++r) {
    const auto& row = j.at(size_t(r));
    if (Index(row.size()) != cols) throw ValidationError(std::string(what) + ": wrong row length");
    for (Index c = 0; c < cols; ++c) {
      const auto& e = row.at(size_t(c));
      if (e.is_number())
        m(r, c) = Complex(e.get<double>(), 0.0);
      else if (e.is_array() && e.size() == 2)
        m(r, c) = Complex(e.at(0).get<double>(), e.at(1).get<double>());
      else
        throw ValidationError(std::string(what) + ": entries must be numbers or [re, im]");
    }
  }
  return m;
}

}  // namespace

FamilySpec family_spec_from_json(const nlohmann::json& j) {
  if (!j.contains("family") || !j.contains("d"))
    throw ValidationError("family spec JSON: required keys are family, d");
  FamilySpec spec;
  spec.d = j.at("d").get<Index>();
  if (spec.d < 1) throw ValidationError("family spec JSON: d must be positive");
  const Family f = family_from_name(j.at("family").get<std::string>());
  const nlohmann::json params =
      j.contains("params") ? j.at("params") : nlohmann::json::object();
  const Index d = spec.d;
  switch (f) {
    case Family::depolarizing:
      spec.params = DepolarizingParams{params.at("p").get<double>()};
      break;
    case Family::transpose_depolarizing:
      spec.params = TransposeDepolarizingParams{params.at("q").get<double>()};
      break;
    case Family::werner_holevo:
      spec.params = WernerHolevoParams{};
      break;
    case Family::pauli: {
      const auto& pj = params.at("P");
      RealMatrix prob(d, d);
      if (pj.is_array() && !pj.empty() && pj.at(0).is_number()) {
        if (Index(pj.size()) != d * d)
          throw ValidationError("pauli JSON: row-major P must have d^2 entries");
        for (Index i = 0; i < d; ++i)
          for (Index k = 0; k < d; ++k) prob(i, k) = pj.at(size_t(i * d + k)).get<double>();
      } else {
        prob = parse_real_matrix(pj, d, d, "pauli JSON P");
      }
      spec.params = PauliParams{std::move(prob)};
      break;
    }
    case Family::mad: {
      RealMatrix decay = RealMatrix::Zero(d, d);
      for (const auto& g : params.at("gamma")) {
        const Index from = g.at("from").get<Index>();
        const Index to = g.at("to").get<Index>();
        if (from <= to || from >= d || to < 0)
          throw ValidationError("mad JSON: gamma entries need from > to within [0, d)");
        decay(from, to) = g.at("rate").get<double>();
      }
      spec.params = MadParams{std::move(decay)};
      break;
    }
    case Family::duc:
      spec.params = DucParams{parse_real_matrix(params.at("A"), d, d, "duc JSON A"),
                              parse_complex_matrix(params.at("B"), d, d, "duc JSON B")};
      break;
    case Family::cduc:
      spec.params = CducParams{parse_real_matrix(params.at("A"), d, d, "cduc JSON A"),
                               parse_complex_matrix(params.at("B"), d, d, "cduc JSON B")};
      break;
    case Family::dephasing: {
      const auto& bj = params.at("B");
      Matrix corr;
      if (bj.is_string() && bj.get<std::string>() == "identity")
        corr = Matrix::Identity(d, d);
      else if (bj.is_string() && bj.get<std::string>() == "ones")
        corr = Matrix::Constant(d, d, 1.0);
      else
        corr = parse_complex_matrix(bj, d, d, "dephasing JSON B");
      spec.params = DephasingParams{std::move(corr)};
      break;
    }
    case Family::unitary_dilation:
      spec.params = UnitaryDilationParams{
          parse_complex_matrix(params.at("V"), d * d, d * d, "unitary dilation JSON V")};
      break;
  }
  return spec;
}

RealMatrix random_column_stochastic(Index d, Rng& rng) {
  std::uniform_real_distribution<double> unif(0.05, 1.0);
  RealMatrix a(d, d);
  for (Index i = 0; i < d; ++i)
    for (Index j = 0; j < d; ++j) a(i, j) = unif(rng);
  for (Index j = 0; j < d; ++j) a.col(j) /= a.col(j).sum();
  return a;
}

DucParams random_duc_params(Index d, Rng& rng) {
  RealMatrix a = random_column_stochastic(d, rng);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  Matrix b = Matrix::Zero(d, d);
  for (Index i = 0; i < d; ++i) b(i, i) = a(i, i);
  for (Index i = 0; i < d; ++i)
    for (Index j = i + 1; j < d; ++j) {
      const double magnitude = unif(rng) * std::sqrt(a(i, j) * a(j, i));
      b(i, j) = std::polar(magnitude, 2.0 * std::numbers::pi * unif(rng));
      b(j, i) = std::conj(b(i, j));
    }
  return {std::move(a), std::move(b)};
}

CducParams random_cduc_params(Index d, Rng& rng) {
  RealMatrix a = random_column_stochastic(d, rng);
  Matrix corr = random_correlation(d, rng);
  RealVector scale(d);
  for (Index i = 0; i < d; ++i) scale(i) = std::sqrt(a(i, i));
  Matrix b = scale.cast<Complex>().asDiagonal() * corr * scale.cast<Complex>().asDiagonal();
  return {std::move(a), std::move(b)};
}

std::string params_summary(const FamilySpec& spec) {
  std::ostringstream out;
  out.precision(6);
  switch (spec.family()) {
    case Family::depolarizing:
      out << "p=" << std::get<DepolarizingParams>(spec.params).p;
      break;
    case Family::transpose_depolarizing:
      out << "q=" << std::get<TransposeDepolarizingParams>(spec.params).q;
      break;
    case Family::werner_holevo:
      out << "q=d/(d-1)";
      break;
    case Family::pauli: {
      const auto& p = std::get<PauliParams>(spec.params).prob;
      Index nnz = 0;
      for (Index i = 0; i < p.rows(); ++i)
        for (Index j = 0; j < p.cols(); ++j)
          if (p(i, j) > 0.0) ++nnz;
      out << "nnz=" << nnz;
      break;
    }
    case Family::mad: {
      const auto& g = std::get<MadParams>(spec.params).decay;
      bool first = true;
      for (Index j = 0; j < g.rows(); ++j)
        for (Index i = 0; i < j; ++i)
          if (g(j, i) != 0.0) {
            out << (first ? "" : ";") << j << "->" << i << ":" << g(j, i);
            first = false;
          }
      if (first) out << "identity";
      break;
    }
    case Family::duc:
    case Family::cduc:
      out << "d=" << spec.d;
      break;
    case Family::dephasing: {
      const auto& b = std::get<DephasingParams>(spec.params).corr;
      out << "rank_B=" << numerical_rank(b, ToleranceConfig{});
      break;
    }
    case Family::unitary_dilation:
      out << "haar";
      break;
  }
  return out.str();
}

}  // namespace qcap
