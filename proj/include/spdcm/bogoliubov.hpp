#pragma once

#include "spdcm/kernel_matrix.hpp"

namespace spdcm {

/// H(z) on the grid; H is D4 invariant so either basis works.
KernelMatrix bilinear_kernel_matrix(const Kernels& kernels, const KernelMatrix::Basis& basis,
                                    double z);

/// Closed-form H_m on the grid.
KernelMatrix contracted_kernel_matrix(const Kernels& kernels, const KernelMatrix::Basis& basis,
                                      int m);

struct UVPair {
    KernelMatrix U, V;
};

/// Defects of the Bogoliubov relations, all max-abs over weight-absorbed entries.
struct BogoliubovDefects {
    double stated = 0;     // U†⋄U − V†⋄V − 1
    double canonical = 0;  // U†⋄U − Vᵀ⋄V* − 1, conserved by the ODE
    double rows = 0;       // U⋄U† − V⋄V† − 1, conserved by the ODE
    double u_hermitian = 0;
    double v_symmetric = 0;
    double uv_symmetric = 0;
};

BogoliubovDefects bogoliubov_defects(const UVPair& uv);

struct OdeStation {
    double z = 0;
    BogoliubovDefects defects;
};

struct OdeResult {
    UVPair uv;
    std::vector<OdeStation> stations;
};

/// Fixed-step RK4 for ∂zU = ½V⋄H, ∂zV = ½U⋄H* from U(0)=1, V(0)=0.
/// Defects are recorded at n_stations evenly spaced z (0 disables).
OdeResult solve_UV_ode(const Kernels& kernels, const KernelMatrix::Basis& basis, double L,
                       int steps, int n_stations = 8);

/// Nested z-ordered integrals up to `order` kernels (≤ 6), each level done by
/// a 4th-order cumulative rule on z_nodes equally spaced nodes.
UVPair series_UV(const Kernels& kernels, const KernelMatrix::Basis& basis, double L, int order,
                 int z_nodes = 33);

struct ABPair {
    KernelMatrix A, B;
};

/// A = U†⋄U + Vᵀ⋄V*, B = U†⋄V + Vᵀ⋄U*.
ABPair build_AB(const UVPair& uv);

/// Largest relative residual of ∂zA = ½H†⋄B* + ½B⋄H and ∂zB = ½H†⋄Aᵀ + ½A⋄H*,
/// with z derivatives from five-point central differences along an RK4 trajectory.
double ab_defect(const Kernels& kernels, const KernelMatrix::Basis& basis, double L, int steps);

/// Closed-form thin-crystal U − 1 and V sums on the grid.
UVPair thin_crystal_matrices(const Kernels& kernels, const KernelMatrix::Basis& basis,
                             int n_max = 32);

/// cosh(L|H|/2) − 1 and −i·e^{−iφ}·sinh(L|H|/2) as matrix functions of |H| at
/// z = 0, in the phase convention of thin_crystal_matrices.
UVPair thin_crystal_matrix_functions(const Kernels& kernels, const KernelMatrix::Basis& basis);

}  // namespace spdcm
