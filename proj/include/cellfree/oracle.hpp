// SPDX-License-Identifier: Apache-2.0
//
// cellfree-sim: downlink system-level simulator for cell-free massive MIMO
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------

#pragma once

#include <Eigen/Dense>
#include <complex>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include "cellfree/association.hpp"
#include "cellfree/channel.hpp"
#include "cellfree/power.hpp"

namespace cellfree {

// Desk-scale Monte-Carlo simulation of the actual transmit equation. Used
// to validate the closed-form SINR transcription term by term, never for
// production-scale evaluation.
//
// Per realization the oracle draws Rayleigh channels g_mk = sqrt(beta) h,
// forms pilot observations at pilot SNR rho_p, computes the linear-MMSE
// channel estimates, and accumulates the effective gains
//   a(k, k') = sum_m sqrt(eta_mk') g_mk conj(ghat_mk'),
// from which the use-and-then-forget SINR terms follow:
//   desired        = rho_d |E a(k,k)|^2
//   contamination  = rho_d sum_{k'!=k, copilot} |E a(k,k')|^2
//   interference   = rho_d sum_{k'} Var a(k,k')
// Standard errors come from the delta method over the joint sample
// covariance of (Re a, Im a, |a|^2).

struct TermEstimate {
    double value = 0.0;
    double std_err = 0.0;
};

struct OracleUeEstimate {
    TermEstimate desired;
    TermEstimate pilot_contamination;
    TermEstimate interference;
    double sinr() const {
        return desired.value / (pilot_contamination.value + interference.value + 1.0);
    }
};

struct OracleReport {
    std::vector<OracleUeEstimate> ue;
    // Diagnostics: empirical E|ghat|^2 (should match gamma) and the MMSE
    // orthogonality residual E[(g - ghat) conj(ghat)] (should vanish).
    Matrix ghat_ms_mean, ghat_ms_se;
    Matrix orth_re_mean, orth_re_se;
    Matrix orth_im_mean, orth_im_se;
    std::uint64_t n_realizations = 0;
};

namespace detail {

inline void check_oracle_guard(const LargeScaleState &state, std::uint64_t n_realizations) {
    if (state.n_aps() > 8 || state.n_ues() > 4)
        throw std::invalid_argument(
            "oracle: refusing M > 8 or K > 4; the oracle is for desk-scale validation only");
    if (n_realizations < 10000)
        throw std::invalid_argument("oracle: need at least 1e4 realizations");
}

// MMSE estimator gains c_mk: ghat_mk = c_mk y_{m,pilot(k)} with
// y the pilot-matched observation. E|ghat|^2 = gamma by construction.
inline Matrix mmse_gains(const LargeScaleState &state) {
    const int m_aps = state.n_aps();
    const int k_ues = state.n_ues();
    const double trp = static_cast<double>(state.tau) * state.rho_p;
    Matrix group_sum = Matrix::Zero(m_aps, state.tau);
    for (int k = 0; k < k_ues; ++k)
        group_sum.col(state.pilot_of_ue[k]) += state.beta.col(k);
    Matrix c(m_aps, k_ues);
    for (int k = 0; k < k_ues; ++k)
        c.col(k) = std::sqrt(trp) * state.beta.col(k) /
                   (trp * group_sum.col(state.pilot_of_ue[k]) + 1.0);
    return c;
}

struct Realization {
    Eigen::ArrayXXcd g;    // channels
    Eigen::ArrayXXcd ghat; // MMSE estimates
};

inline void draw_realization(Rng &rng, const LargeScaleState &state, const Matrix &mmse_gain,
                             const Matrix &sqrt_beta, Realization &out) {
    const int m_aps = state.n_aps();
    const int k_ues = state.n_ues();
    const double pilot_scale = std::sqrt(static_cast<double>(state.tau) * state.rho_p);
    for (int k = 0; k < k_ues; ++k)
        for (int m = 0; m < m_aps; ++m)
            out.g(m, k) = sqrt_beta(m, k) * rng.cgaussian();
    // Pilot-matched observations y(m, p), then the estimates.
    Eigen::ArrayXXcd y = Eigen::ArrayXXcd::Zero(m_aps, state.tau);
    for (int p = 0; p < state.tau; ++p)
        for (int m = 0; m < m_aps; ++m)
            y(m, p) = rng.cgaussian();
    for (int k = 0; k < k_ues; ++k)
        y.col(state.pilot_of_ue[k]) += pilot_scale * out.g.col(k);
    for (int k = 0; k < k_ues; ++k)
        out.ghat.col(k) = mmse_gain.col(k) * y.col(state.pilot_of_ue[k]);
}

// Variance of f(sample mean) by the delta method: grad' (C/n) grad.
inline double delta_std_err(const Eigen::MatrixXd &cov, const Eigen::VectorXd &grad,
                            std::uint64_t n) {
    const double var = grad.dot(cov * grad) / static_cast<double>(n);
    return var > 0.0 ? std::sqrt(var) : 0.0;
}

} // namespace detail

inline OracleReport simulate_sinr(const LargeScaleState &state, const ServingMap &map,
                                  const PowerMatrix &pm, std::uint64_t n_realizations,
                                  std::uint64_t seed) {
    detail::check_oracle_guard(state, n_realizations);
    const int m_aps = state.n_aps();
    const int k_ues = state.n_ues();
    if (map.n_aps() != m_aps || map.n_ues() != k_ues)
        throw std::invalid_argument("simulate_sinr: serving map shape mismatch");

    const Matrix mmse_gain = detail::mmse_gains(state);
    const Matrix sqrt_beta = state.beta.sqrt();
    const Matrix sqrt_eta = pm.eta.sqrt();

    // Per UE k: moment accumulators of the 3K-vector
    // [Re a(k,0), Im a(k,0), |a(k,0)|^2, Re a(k,1), ...].
    const int dim = 3 * k_ues;
    std::vector<Eigen::VectorXd> sum_x(k_ues, Eigen::VectorXd::Zero(dim));
    std::vector<Eigen::MatrixXd> sum_xx(k_ues, Eigen::MatrixXd::Zero(dim, dim));

    Matrix ghat2_sum = Matrix::Zero(m_aps, k_ues), ghat4_sum = Matrix::Zero(m_aps, k_ues);
    Matrix orth_re_sum = Matrix::Zero(m_aps, k_ues), orth_re_sq = Matrix::Zero(m_aps, k_ues);
    Matrix orth_im_sum = Matrix::Zero(m_aps, k_ues), orth_im_sq = Matrix::Zero(m_aps, k_ues);

    Rng rng(seed);
    detail::Realization r{Eigen::ArrayXXcd(m_aps, k_ues), Eigen::ArrayXXcd(m_aps, k_ues)};
    Eigen::VectorXd x(dim);
    for (std::uint64_t it = 0; it < n_realizations; ++it) {
        detail::draw_realization(rng, state, mmse_gain, sqrt_beta, r);
        for (int k = 0; k < k_ues; ++k) {
            for (int k2 = 0; k2 < k_ues; ++k2) {
                std::complex<double> a{0.0, 0.0};
                for (int m : map.serving_aps[k2])
                    a += sqrt_eta(m, k2) * r.g(m, k) * std::conj(r.ghat(m, k2));
                x(3 * k2) = a.real();
                x(3 * k2 + 1) = a.imag();
                x(3 * k2 + 2) = std::norm(a);
            }
            sum_x[k] += x;
            sum_xx[k].noalias() += x * x.transpose();
        }
        for (int k = 0; k < k_ues; ++k) {
            for (int m = 0; m < m_aps; ++m) {
                const double g2 = std::norm(r.ghat(m, k));
                ghat2_sum(m, k) += g2;
                ghat4_sum(m, k) += g2 * g2;
                const std::complex<double> e = (r.g(m, k) - r.ghat(m, k)) * std::conj(r.ghat(m, k));
                orth_re_sum(m, k) += e.real();
                orth_re_sq(m, k) += e.real() * e.real();
                orth_im_sum(m, k) += e.imag();
                orth_im_sq(m, k) += e.imag() * e.imag();
            }
        }
    }

    const double n = static_cast<double>(n_realizations);
    OracleReport report;
    report.n_realizations = n_realizations;
    report.ue.resize(k_ues);
    for (int k = 0; k < k_ues; ++k) {
        const Eigen::VectorXd mu = sum_x[k] / n;
        const Eigen::MatrixXd cov = (sum_xx[k] - n * mu * mu.transpose()) / (n - 1.0);
        const double rho_d = state.rho_d;

        // desired = rho_d |mean a(k,k)|^2
        Eigen::VectorXd grad = Eigen::VectorXd::Zero(dim);
        grad(3 * k) = 2.0 * rho_d * mu(3 * k);
        grad(3 * k + 1) = 2.0 * rho_d * mu(3 * k + 1);
        OracleUeEstimate &est = report.ue[k];
        est.desired.value = rho_d * (mu(3 * k) * mu(3 * k) + mu(3 * k + 1) * mu(3 * k + 1));
        est.desired.std_err = detail::delta_std_err(cov, grad, n_realizations);

        // contamination: coherent part from copilot UEs only
        grad.setZero();
        double pc = 0.0;
        for (int k2 = 0; k2 < k_ues; ++k2) {
            if (k2 == k || state.pilot_of_ue[k2] != state.pilot_of_ue[k])
                continue;
            pc += rho_d * (mu(3 * k2) * mu(3 * k2) + mu(3 * k2 + 1) * mu(3 * k2 + 1));
            grad(3 * k2) = 2.0 * rho_d * mu(3 * k2);
            grad(3 * k2 + 1) = 2.0 * rho_d * mu(3 * k2 + 1);
        }
        est.pilot_contamination.value = pc;
        est.pilot_contamination.std_err = detail::delta_std_err(cov, grad, n_realizations);

        // interference = rho_d sum_k' (E|a|^2 - |E a|^2)
        grad.setZero();
        double ui = 0.0;
        for (int k2 = 0; k2 < k_ues; ++k2) {
            ui += rho_d *
                  (mu(3 * k2 + 2) - mu(3 * k2) * mu(3 * k2) - mu(3 * k2 + 1) * mu(3 * k2 + 1));
            grad(3 * k2) = -2.0 * rho_d * mu(3 * k2);
            grad(3 * k2 + 1) = -2.0 * rho_d * mu(3 * k2 + 1);
            grad(3 * k2 + 2) = rho_d;
        }
        est.interference.value = ui;
        est.interference.std_err = detail::delta_std_err(cov, grad, n_realizations);
    }

    auto mean_se = [&](const Matrix &sum, const Matrix &sq, Matrix &mean_out, Matrix &se_out) {
        mean_out = sum / n;
        se_out = ((sq / n - mean_out.square()).max(0.0) / (n - 1.0)).sqrt();
    };
    mean_se(ghat2_sum, ghat4_sum, report.ghat_ms_mean, report.ghat_ms_se);
    mean_se(orth_re_sum, orth_re_sq, report.orth_re_mean, report.orth_re_se);
    mean_se(orth_im_sum, orth_im_sq, report.orth_im_mean, report.orth_im_se);
    return report;
}

// Empirical per-AP radiated power E|x_m|^2 / rho_d from simulating the
// restricted transmit equation with random unit-power symbols; equals
// sum_k eta_mk gamma_mk analytically.
struct ApPowerEstimate {
    double mean = 0.0;
    double std_err = 0.0;
    double analytic = 0.0;
};

inline std::vector<ApPowerEstimate> per_ap_radiated_power(const LargeScaleState &state,
                                                          const ServingMap &map,
                                                          const PowerMatrix &pm,
                                                          std::uint64_t n_realizations,
                                                          std::uint64_t seed) {
    detail::check_oracle_guard(state, n_realizations);
    const int m_aps = state.n_aps();
    const int k_ues = state.n_ues();
    const Matrix mmse_gain = detail::mmse_gains(state);
    const Matrix sqrt_beta = state.beta.sqrt();
    const Matrix sqrt_eta = pm.eta.sqrt();

    std::vector<double> sum(m_aps, 0.0), sum_sq(m_aps, 0.0);
    Rng rng(seed);
    detail::Realization r{Eigen::ArrayXXcd(m_aps, k_ues), Eigen::ArrayXXcd(m_aps, k_ues)};
    std::vector<std::complex<double>> symbols(k_ues);
    for (std::uint64_t it = 0; it < n_realizations; ++it) {
        detail::draw_realization(rng, state, mmse_gain, sqrt_beta, r);
        for (int k = 0; k < k_ues; ++k)
            symbols[k] = rng.cgaussian();
        for (int m = 0; m < m_aps; ++m) {
            std::complex<double> xm{0.0, 0.0};
            for (int k : map.served_ues_of_ap[m])
                xm += sqrt_eta(m, k) * std::conj(r.ghat(m, k)) * symbols[k];
            const double v = std::norm(xm); // |x_m|^2 / rho_d
            sum[m] += v;
            sum_sq[m] += v * v;
        }
    }

    const double n = static_cast<double>(n_realizations);
    std::vector<ApPowerEstimate> out(m_aps);
    for (int m = 0; m < m_aps; ++m) {
        out[m].mean = sum[m] / n;
        const double var = std::max(0.0, sum_sq[m] / n - out[m].mean * out[m].mean);
        out[m].std_err = std::sqrt(var / (n - 1.0));
        double analytic = 0.0;
        for (int k = 0; k < k_ues; ++k)
            analytic += pm.eta(m, k) * state.gamma(m, k);
        out[m].analytic = analytic;
    }
    return out;
}

} // namespace cellfree
