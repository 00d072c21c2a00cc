#pragma once

#include <array>
#include <cmath>
#include <vector>

#include "imcflab/common.hpp"
#include "imcflab/grid.hpp"
#include "imcflab/surface.hpp"

namespace imcflab {

/// Diagonal axisymmetric 2-metric E(theta) dtheta^2 + G(theta) dphi^2.  The
/// Christoffels use the same finite differences as the component derivatives,
/// so tensors proportional to the metric are parallel to rounding.
struct LeafMetric2 {
    AxisymGrid grid;
    std::vector<double> E, G, E_th, G_th;

    static LeafMetric2 make(const AxisymGrid& g, std::vector<double> E_in,
                            std::vector<double> G_in) {
        LeafMetric2 m;
        m.grid = g;
        m.E = std::move(E_in);
        m.G = std::move(G_in);
        m.E_th = dtheta_fd4(g, m.E, Parity::even);
        m.G_th = dtheta_fd4(g, m.G, Parity::even);
        return m;
    }

    static LeafMetric2 from_state(const SurfaceState& s) {
        return make(s.grid, s.g_thth, s.g_phph);
    }

    /// Unit round sphere metric sigma.
    static LeafMetric2 round_sigma(const AxisymGrid& g) {
        std::vector<double> E(g.n, 1.0), G(g.n);
        for (int j = 0; j < g.n; ++j) G[j] = sq(std::sin(g.theta[j]));
        return make(g, std::move(E), std::move(G));
    }

    // Gamma^e_{ci}; indices 0 = theta, 1 = phi
    double christoffel(int e, int c, int i, int j) const {
        if (e == 0 && c == 0 && i == 0) return E_th[j] / (2.0 * E[j]);
        if (e == 0 && c == 1 && i == 1) return -G_th[j] / (2.0 * E[j]);
        if (e == 1 && ((c == 0 && i == 1) || (c == 1 && i == 0))) return G_th[j] / (2.0 * G[j]);
        return 0.0;
    }

    double ginv(int a, int j) const { return a == 0 ? 1.0 / E[j] : 1.0 / G[j]; }
};

/// Covariant tensor of rank K on an axisymmetric leaf; all 2^K component
/// functions of theta are stored (index bit 0 = theta, 1 = phi).
template <int K>
struct AxisymTensor {
    static constexpr int ncomp = 1 << K;
    std::array<std::vector<double>, ncomp> comp;

    static Parity parity_of(int idx) {
        int phis = 0;
        for (int p = 0; p < K; ++p) phis += (idx >> p) & 1;
        const int thetas = K - phis;
        return (thetas % 2 == 0) ? Parity::even : Parity::odd;
    }
};

using Tensor1 = AxisymTensor<1>;
using Tensor2 = AxisymTensor<2>;
using Tensor3 = AxisymTensor<3>;
using Tensor4 = AxisymTensor<4>;

inline Tensor2 make_sym2(const std::vector<double>& Tthth, const std::vector<double>& Tthph,
                         const std::vector<double>& Tphph) {
    Tensor2 t;
    t.comp[0b00] = Tthth;
    t.comp[0b01] = Tthph;
    t.comp[0b10] = Tthph;
    t.comp[0b11] = Tphph;
    return t;
}

/// (nabla T)_{c i1..iK} = d_c T - sum_p Gamma^e_{c i_p} T_{..e..}; the new
/// derivative index is the LOWEST bit of the output index.
template <int K>
AxisymTensor<K + 1> covariant_derivative(const AxisymTensor<K>& T, const LeafMetric2& m) {
    AxisymTensor<K + 1> out;
    const int n = m.grid.n;
    std::array<std::vector<double>, AxisymTensor<K>::ncomp> dT;
    for (int idx = 0; idx < AxisymTensor<K>::ncomp; ++idx)
        dT[idx] = dtheta_fd4(m.grid, T.comp[idx], AxisymTensor<K>::parity_of(idx));
    for (int oidx = 0; oidx < AxisymTensor<K + 1>::ncomp; ++oidx) {
        const int c = oidx & 1;
        const int idx = oidx >> 1;
        std::vector<double> val(n, 0.0);
        if (c == 0) val = dT[idx];
        for (int p = 0; p < K; ++p) {
            const int ip = (idx >> p) & 1;
            for (int e = 0; e < 2; ++e) {
                const int swapped = (idx & ~(1 << p)) | (e << p);
                bool any = false;
                for (int j = 0; j < n && !any; ++j) any = m.christoffel(e, c, ip, j) != 0.0;
                if (!any) continue;
                for (int j = 0; j < n; ++j)
                    val[j] -= m.christoffel(e, c, ip, j) * T.comp[swapped][j];
            }
        }
        out.comp[oidx] = std::move(val);
    }
    return out;
}

/// Pointwise squared norm with all indices raised by the metric.
template <int K>
std::vector<double> tensor_norm2(const AxisymTensor<K>& T, const LeafMetric2& m) {
    const int n = m.grid.n;
    std::vector<double> out(n, 0.0);
    for (int idx = 0; idx < AxisymTensor<K>::ncomp; ++idx) {
        for (int j = 0; j < n; ++j) {
            double raise = 1.0;
            for (int p = 0; p < K; ++p) raise *= m.ginv((idx >> p) & 1, j);
            out[j] += raise * T.comp[idx][j] * T.comp[idx][j];
        }
    }
    return out;
}

/// Empirical constant of the interpolation inequality with i=1, m=2:
/// ratio = int |grad T|^2 / sqrt(int |grad^2 T|^2 * int |T|^2), derivatives and
/// norms with the induced metric.
inline double interpolation_ratio(const SurfaceState& s, const Tensor2& T) {
    const LeafMetric2 m = LeafMetric2::from_state(s);
    const Tensor3 dT = covariant_derivative(T, m);
    const Tensor4 d2T = covariant_derivative(dT, m);
    const double iT = surface_integral(s, tensor_norm2(T, m));
    const double i1 = surface_integral(s, tensor_norm2(dT, m));
    const double i2 = surface_integral(s, tensor_norm2(d2T, m));
    const double scale = std::max(iT, 1.0);
    if (i1 <= 1e-24 * scale && i2 <= 1e-24 * scale) return 0.0;  // parallel tensor
    if (i2 <= 1e-24 * scale)
        throw InterpolationDegenerate("interpolation_ratio: grad T != 0 but grad^2 T = 0");
    return i1 / std::sqrt(i2 * iT);
}

}  // namespace imcflab
