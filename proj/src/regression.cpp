#include "nearinterp/regression.hpp"

#include <cmath>
#include <random>
#include <string>

#include "nearinterp/errors.hpp"

namespace nearinterp {
namespace {

enum class Stream : std::uint32_t { kBetaStar = 1, kColumn = 2, kHoldout = 3 };

// Independent generator per (seed, stream, index) so that columns can be
// produced in any order.
std::mt19937_64 make_stream(std::uint64_t seed, Stream stream, std::uint64_t index) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(stream), static_cast<std::uint32_t>(index),
                    static_cast<std::uint32_t>(index >> 32)};
  return std::mt19937_64(seq);
}

void check_rho(double& rho) {
  if (!(rho > 0.0) || !std::isfinite(rho))
    throw DomainError("ridge: rho must be finite and > 0, got " + std::to_string(rho));
  rho = std::max(rho, kMinRho);
}

void check_finite(const Dataset& data) {
  if (!data.X.allFinite() || !data.y.allFinite())
    throw NumericalError("ridge: data contains non-finite values");
  if (data.y.size() != data.X.cols())
    throw DomainError("ridge: y length does not match the number of samples");
}

RidgeFit summarize(const Dataset& data, Eigen::VectorXd beta_hat, double rho) {
  RidgeFit fit;
  const Eigen::VectorXd residual = data.X.transpose() * beta_hat - data.y;
  fit.train_mse = residual.squaredNorm() / static_cast<double>(data.n());
  fit.sq_norm = beta_hat.squaredNorm();
  fit.test_mse_analytic = test_mse_analytic(beta_hat, data, data.sigma_sq);
  fit.rho = rho;
  fit.beta_hat = std::move(beta_hat);
  return fit;
}

}  // namespace

void DataModel::validate() const {
  if (n < 1 || p < 1) throw DomainError("data model: n and p must be >= 1");
  if (!(alpha > 1.0)) throw DomainError("data model: alpha must be > 1");
  if (!(sigma_sq >= 0.0) || !std::isfinite(sigma_sq))
    throw DomainError("data model: sigma_sq must be finite and >= 0");
  if (beta_star_scale && !(*beta_star_scale >= 0.0))
    throw DomainError("data model: beta_star_scale must be >= 0");
}

double DataModel::effective_beta_star_scale() const {
  return beta_star_scale.value_or(10.0 / static_cast<double>(p));
}

Dataset generate(const DataModel& model) {
  model.validate();
  Dataset data;
  data.sigma_sq = model.sigma_sq;
  data.seed = model.seed;
  data.eigenvalues.resize(model.p);
  for (long i = 0; i < model.p; ++i)
    data.eigenvalues[i] = std::pow(static_cast<double>(i + 1), -model.alpha);
  const Eigen::ArrayXd root = data.eigenvalues.array().sqrt();

  std::normal_distribution<double> normal(0.0, 1.0);
  data.beta_star.resize(model.p);
  {
    auto rng = make_stream(model.seed, Stream::kBetaStar, 0);
    const double scale = std::sqrt(model.effective_beta_star_scale());
    for (long i = 0; i < model.p; ++i) data.beta_star[i] = scale * normal(rng);
  }

  data.X.resize(model.p, model.n);
  Eigen::VectorXd noise(model.n);
  const double noise_sd = std::sqrt(model.sigma_sq);
  for (long j = 0; j < model.n; ++j) {
    auto rng = make_stream(model.seed, Stream::kColumn, static_cast<std::uint64_t>(j));
    normal.reset();
    auto column = data.X.col(j);
    for (long i = 0; i < model.p; ++i) column[i] = root[i] * normal(rng);
    noise[j] = noise_sd * normal(rng);
  }
  data.y = data.X.transpose() * data.beta_star + noise;
  return data;
}

RidgeFit fit_ridge_dual(const Dataset& data, double rho) {
  check_rho(rho);
  check_finite(data);
  const long n = data.n();
  Eigen::MatrixXd gram = Eigen::MatrixXd::Zero(n, n);
  gram.selfadjointView<Eigen::Lower>().rankUpdate(data.X.transpose());
  gram.diagonal().array() += static_cast<double>(n) * rho;
  Eigen::LLT<Eigen::MatrixXd, Eigen::Lower> llt(gram);
  if (llt.info() != Eigen::Success)
    throw NumericalError("ridge (dual): Cholesky factorization failed");
  const Eigen::VectorXd weights = llt.solve(data.y);
  return summarize(data, data.X * weights, rho);
}

RidgeFit fit_ridge_primal(const Dataset& data, double rho) {
  check_rho(rho);
  check_finite(data);
  const long p = data.p();
  const double inv_n = 1.0 / static_cast<double>(data.n());
  Eigen::MatrixXd cov = Eigen::MatrixXd::Zero(p, p);
  cov.selfadjointView<Eigen::Lower>().rankUpdate(data.X, inv_n);
  cov.diagonal().array() += rho;
  Eigen::LLT<Eigen::MatrixXd, Eigen::Lower> llt(cov);
  if (llt.info() != Eigen::Success)
    throw NumericalError("ridge (primal): Cholesky factorization failed");
  const Eigen::VectorXd rhs = inv_n * (data.X * data.y);
  return summarize(data, llt.solve(rhs), rho);
}

RidgeFit fit_ridge(const Dataset& data, double rho) {
  return data.p() > data.n() ? fit_ridge_dual(data, rho) : fit_ridge_primal(data, rho);
}

double test_mse_analytic(const Eigen::VectorXd& beta_hat, const Dataset& data, double sigma_sq) {
  if (beta_hat.size() != data.beta_star.size() || beta_hat.size() != data.eigenvalues.size())
    throw DomainError("test_mse_analytic: dimension mismatch");
  const Eigen::ArrayXd diff = (beta_hat - data.beta_star).array();
  return sigma_sq + (data.eigenvalues.array() * diff.square()).sum();
}

EmpiricalTestMse test_mse_empirical(const Eigen::VectorXd& beta_hat, const Dataset& data,
                                    long n_test, std::uint64_t seed) {
  if (n_test < 2) throw DomainError("test_mse_empirical: n_test must be >= 2");
  if (beta_hat.size() != data.p()) throw DomainError("test_mse_empirical: dimension mismatch");
  const Eigen::ArrayXd root = data.eigenvalues.array().sqrt();
  const Eigen::ArrayXd delta = (beta_hat - data.beta_star).array();
  const double noise_sd = std::sqrt(data.sigma_sq);
  std::normal_distribution<double> normal(0.0, 1.0);
  double sum = 0.0;
  double sum_sq = 0.0;
  for (long j = 0; j < n_test; ++j) {
    auto rng = make_stream(seed, Stream::kHoldout, static_cast<std::uint64_t>(j));
    // x^T beta_hat - y = x^T (beta_hat - beta*) - eps
    double err = 0.0;
    for (long i = 0; i < data.p(); ++i) err += root[i] * normal(rng) * delta[i];
    err -= noise_sd * normal(rng);
    sum += err * err;
    sum_sq += err * err * err * err;
  }
  const double m = static_cast<double>(n_test);
  const double mean = sum / m;
  const double var = std::max(0.0, (sum_sq / m - mean * mean) * m / (m - 1.0));
  return {mean, std::sqrt(var / m)};
}

std::vector<RidgeFit> sweep_rho(const Dataset& data, std::span<const double> rho_list) {
  if (rho_list.empty()) throw DomainError("sweep_rho: empty regulariser list");
  check_finite(data);
  std::vector<double> rhos(rho_list.begin(), rho_list.end());
  for (double& rho : rhos) check_rho(rho);

  Eigen::BDCSVD<Eigen::MatrixXd> svd(data.X, Eigen::ComputeThinU | Eigen::ComputeThinV);
  if (svd.info() != Eigen::Success) throw NumericalError("sweep_rho: SVD failed");
  const Eigen::ArrayXd s = svd.singularValues().array();
  const Eigen::ArrayXd projected = (svd.matrixV().transpose() * data.y).array();
  const double n = static_cast<double>(data.n());

  std::vector<RidgeFit> fits;
  fits.reserve(rhos.size());
  for (double rho : rhos) {
    const Eigen::VectorXd coef = (s / (s.square() + n * rho) * projected).matrix();
    fits.push_back(summarize(data, svd.matrixU() * coef, rho));
  }
  return fits;
}

double expected_noise_norm(const Dataset& data, double rho) {
  check_rho(rho);
  check_finite(data);
  const double n = static_cast<double>(data.n());
  // The nonzero spectrum of Sigma_hat = X X^T / n equals that of X^T X / n.
  const bool wide = data.p() > data.n();
  const Eigen::MatrixXd small =
      wide ? Eigen::MatrixXd(data.X.transpose() * data.X / n) : Eigen::MatrixXd(data.X * data.X.transpose() / n);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(small, Eigen::EigenvaluesOnly);
  if (eig.info() != Eigen::Success) throw NumericalError("expected_noise_norm: eigensolver failed");
  double trace = 0.0;
  for (double mu : eig.eigenvalues()) {
    mu = std::max(mu, 0.0);
    trace += mu / ((mu + rho) * (mu + rho));
  }
  return data.sigma_sq / n * trace;
}

}  // namespace nearinterp
