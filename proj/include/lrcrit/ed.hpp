#pragma once

#include <cblas.h>
#include <lapacke.h>

#include <cmath>
#include <cstddef>
#include <string>
#include <vector>

#include "lrcrit/errors.hpp"
#include "lrcrit/protocol.hpp"

namespace lrcrit {

// Dense 2^N x 2^N real symmetric Hamiltonian, column-major. Bit j of a basis
// index holds spin j: bit set means sz = +1.
struct spin_hamiltonian {
    int N = 0;
    std::size_t dim = 0;
    std::vector<double> matrix;
    std::string model;
};

struct eigen_system {
    std::size_t dim = 0;
    std::vector<double> eigenvalues;   // ascending
    std::vector<double> eigenvectors;  // orthonormal columns, column-major
};

namespace detail {

inline void check_ed_size(int N) {
    if (N < 2 || N > 14)
        throw invalid_params("model.N for dense diagonalization must be in [2, 14]");
}

inline double sz_bit(std::size_t state, int j) {
    return (state >> j) & 1u ? 1.0 : -1.0;
}

}  // namespace detail

// H = -J sum_j (g sx_j + sz_j sz_{j+1}) + J h sum_j sz_j, periodic chain
inline spin_hamiltonian build_longitudinal(int N, double g, double h, double J) {
    detail::check_ed_size(N);
    const std::size_t dim = std::size_t{1} << N;
    spin_hamiltonian H{N, dim, std::vector<double>(dim * dim, 0.0), "tfim_longitudinal"};
    for (std::size_t s = 0; s < dim; ++s) {
        double diag = 0.0;
        for (int j = 0; j < N; ++j) {
            diag -= J * detail::sz_bit(s, j) * detail::sz_bit(s, (j + 1) % N);
            diag += J * h * detail::sz_bit(s, j);
        }
        H.matrix[s * dim + s] = diag;
        for (int j = 0; j < N; ++j) {
            const std::size_t t = s ^ (std::size_t{1} << j);
            H.matrix[s * dim + t] += -J * g;
        }
    }
    return H;
}

// H = sum_{i<j} J |i-j|^-r sz_i sz_j + J g sum_j sx_j, open chain; the
// antiferromagnetic convention is J < 0 with the zz sum written positive
inline spin_hamiltonian build_long_range(int N, double g, double r, double J) {
    detail::check_ed_size(N);
    const std::size_t dim = std::size_t{1} << N;
    spin_hamiltonian H{N, dim, std::vector<double>(dim * dim, 0.0), "long_range_ising"};
    std::vector<double> coupling(static_cast<std::size_t>(N), 0.0);
    for (int d = 1; d < N; ++d) coupling[static_cast<std::size_t>(d)] = J * std::pow(d, -r);
    for (std::size_t s = 0; s < dim; ++s) {
        double diag = 0.0;
        for (int i = 0; i < N; ++i)
            for (int j = i + 1; j < N; ++j)
                diag += coupling[static_cast<std::size_t>(j - i)] * detail::sz_bit(s, i) *
                        detail::sz_bit(s, j);
        H.matrix[s * dim + s] = diag;
        for (int j = 0; j < N; ++j) {
            const std::size_t t = s ^ (std::size_t{1} << j);
            H.matrix[s * dim + t] += J * g;
        }
    }
    return H;
}

inline eigen_system diagonalize(const spin_hamiltonian& H) {
    eigen_system es;
    es.dim = H.dim;
    es.eigenvalues.resize(H.dim);
    es.eigenvectors = H.matrix;  // dsyevd overwrites with eigenvectors
    const auto n = static_cast<lapack_int>(H.dim);
    const lapack_int info = LAPACKE_dsyevd(LAPACK_COL_MAJOR, 'V', 'U', n,
                                           es.eigenvectors.data(), n, es.eigenvalues.data());
    if (info != 0)
        throw numeric_error("dsyevd failed with info = " + std::to_string(info));
    return es;
}

struct ground_state_result {
    std::vector<double> psi;
    double energy = 0.0;
    bool degenerate = false;  // a second level within 1e-10
};

inline ground_state_result ground_state(const eigen_system& es) {
    ground_state_result gs;
    gs.energy = es.eigenvalues.at(0);
    gs.psi.assign(es.eigenvectors.begin(),
                  es.eigenvectors.begin() + static_cast<std::ptrdiff_t>(es.dim));
    gs.degenerate = es.dim > 1 && es.eigenvalues[1] - es.eigenvalues[0] < 1e-10;
    return gs;
}

// <psi(t)| M_x |psi(t)> with M_x = (1/N) sum_j sx_j, evolved exactly through
// the eigendecomposition of the post-quench Hamiltonian: with c = V^T psi0 and
// d(t) = c o e^{-i w t},  value(t) = Re(d)^T Mt Re(d) + Im(d)^T Mt Im(d)
// where Mt = V^T (M_x V). M_x V is assembled by N bit-flip gathers; the rest
// is two real GEMMs, so no complex arithmetic is needed anywhere.
inline time_series evolve_and_measure(const eigen_system& es, int N,
                                      const std::vector<double>& psi0,
                                      const std::vector<double>& times) {
    const std::size_t dim = es.dim;
    if (psi0.size() != dim) throw invalid_params("psi0 length must match the Hamiltonian");
    double norm = 0.0;
    for (double x : psi0) norm += x * x;
    if (std::abs(norm - 1.0) > 1e-9) throw invalid_params("psi0 must be normalized");
    const std::size_t nt = times.size();
    const auto n = static_cast<int>(dim);

    // Mx V, one flipped-row gather per site
    std::vector<double> mxv(dim * dim, 0.0);
    const double inv_n = 1.0 / static_cast<double>(N);
    for (std::size_t col = 0; col < dim; ++col) {
        const double* v = es.eigenvectors.data() + col * dim;
        double* out = mxv.data() + col * dim;
        for (std::size_t s = 0; s < dim; ++s) {
            double acc = 0.0;
            for (int j = 0; j < N; ++j) acc += v[s ^ (std::size_t{1} << j)];
            out[s] = acc * inv_n;
        }
    }
    std::vector<double> mt(dim * dim);
    cblas_dgemm(CblasColMajor, CblasTrans, CblasNoTrans, n, n, n, 1.0, es.eigenvectors.data(),
                n, mxv.data(), n, 0.0, mt.data(), n);
    mxv.clear();
    mxv.shrink_to_fit();

    std::vector<double> c(dim);
    cblas_dgemv(CblasColMajor, CblasTrans, n, n, 1.0, es.eigenvectors.data(), n, psi0.data(), 1,
                0.0, c.data(), 1);

    // d-vectors for all sample times, then one GEMM per quadrature component
    std::vector<double> dre(dim * nt);
    std::vector<double> dim_(dim * nt);
    for (std::size_t i = 0; i < nt; ++i) {
        const double t = times[i];
        for (std::size_t k = 0; k < dim; ++k) {
            const double ph = es.eigenvalues[k] * t;
            dre[i * dim + k] = c[k] * std::cos(ph);
            dim_[i * dim + k] = -c[k] * std::sin(ph);
        }
    }
    const auto m = static_cast<int>(nt);
    std::vector<double> gre(dim * nt);
    std::vector<double> gim(dim * nt);
    cblas_dgemm(CblasColMajor, CblasNoTrans, CblasNoTrans, n, m, n, 1.0, mt.data(), n,
                dre.data(), n, 0.0, gre.data(), n);
    cblas_dgemm(CblasColMajor, CblasNoTrans, CblasNoTrans, n, m, n, 1.0, mt.data(), n,
                dim_.data(), n, 0.0, gim.data(), n);

    time_series out;
    out.times = times;
    out.values.assign(nt, 0.0);
    for (std::size_t i = 0; i < nt; ++i) {
        double acc = 0.0;
        for (std::size_t k = 0; k < dim; ++k)
            acc += dre[i * dim + k] * gre[i * dim + k] + dim_[i * dim + k] * gim[i * dim + k];
        out.values[i] = acc;
    }
    out.metadata = {{"observable", "mx"}, {"source", "ed"}};
    return out;
}

// <v_n| P |v_n> with P = prod_j sx_j: the parity operator maps a basis state
// to its bit complement, so the diagonal is a complement-overlap sum.
inline std::vector<double> parity_labels(const eigen_system& es) {
    const std::size_t dim = es.dim;
    const std::size_t mask = dim - 1;
    std::vector<double> lab(dim);
    for (std::size_t col = 0; col < dim; ++col) {
        const double* v = es.eigenvectors.data() + col * dim;
        double acc = 0.0;
        for (std::size_t s = 0; s < dim; ++s) acc += v[s] * v[(~s) & mask];
        lab[col] = acc;
    }
    return lab;
}

}
