#pragma once

#include "spdcm/mode_grid.hpp"

#include <Eigen/Dense>
#include <Eigen/SparseCore>

#include <functional>
#include <memory>
#include <vector>

namespace spdcm {

enum class Symmetry { none, d4 };

/// Real orthogonal basis that block-diagonalizes kernels invariant under the
/// D4 symmetry of the K grid (reflections of K_x, K_y and their exchange,
/// applied to both arguments). Symmetry::none is the trivial one-block basis.
class SymmetryBasis {
public:
    SymmetryBasis(std::shared_ptr<const ModeGrid> grid, Symmetry sym);

    struct Copy {
        Eigen::SparseMatrix<double> Q;  // N × dim, orthonormal columns
    };
    struct Sector {
        int dim = 0;
        std::vector<Copy> copies;  // a block acts identically on every copy
        // pattern used by separable builds: entries (a, b) of the 1-D bases
        enum class Kind { dense, ee_sym, ee_anti, oo_sym, oo_anti, eo } kind = Kind::dense;
        std::vector<std::pair<int, int>> pairs;
    };
    struct RowEntry {
        int sector;
        int col;
        double coeff;
        int copy;
    };

    const ModeGrid& grid() const { return *grid_; }
    std::shared_ptr<const ModeGrid> grid_ptr() const { return grid_; }
    Symmetry symmetry() const { return sym_; }
    const std::vector<Sector>& sectors() const { return sectors_; }
    const std::vector<RowEntry>& row(int p) const { return rows_[p]; }
    const Eigen::MatrixXd& even_basis() const { return E_; }
    const Eigen::MatrixXd& odd_basis() const { return O_; }

private:
    std::shared_ptr<const ModeGrid> grid_;
    Symmetry sym_;
    std::vector<Sector> sectors_;
    std::vector<std::vector<RowEntry>> rows_;
    Eigen::MatrixXd E_, O_;
};

/// Kernel discretized on a ModeGrid, stored weight-absorbed:
/// M_pq = √w_p·K(k_p,k_q)·√w_q. The ⋄-contraction is then the matrix product
/// and the identity kernel is the unit matrix.
class KernelMatrix {
public:
    using Basis = std::shared_ptr<const SymmetryBasis>;

    KernelMatrix() = default;
    static KernelMatrix zero(Basis basis);
    static KernelMatrix identity(Basis basis);

    /// General kernel K(k₁,k₂). With a D4 basis the kernel must be D4 invariant.
    static KernelMatrix from_function(Basis basis,
                                      const std::function<cd(const WaveVector&, const WaveVector&)>& fn);

    /// Kernel F(ω₁,ω₂)·g(K₁x,K₂x)·g(K₁y,K₂y). fill(io, jo, g) writes the plain
    /// n_k×n_k factor g for the frequency pair and returns F.
    using SeparableFill = std::function<cd(int io, int jo, Eigen::MatrixXcd& g)>;
    static KernelMatrix from_separable(Basis basis, const SeparableFill& fill);

    static KernelMatrix from_dense(Basis basis, const Eigen::MatrixXcd& absorbed);

    const Basis& basis() const { return basis_; }
    const ModeGrid& grid() const { return basis_->grid(); }
    int size() const { return basis_->grid().size(); }

    /// Weight-absorbed entry.
    cd at(int p, int q) const;
    /// Plain kernel value (weights divided out).
    cd kernel(int p, int q) const;
    Eigen::MatrixXcd to_dense() const;

    KernelMatrix adjoint() const;
    KernelMatrix transpose() const;
    KernelMatrix conjugate() const;

    KernelMatrix& operator+=(const KernelMatrix& o);
    KernelMatrix& operator-=(const KernelMatrix& o);
    KernelMatrix& operator*=(cd s);
    friend KernelMatrix operator+(KernelMatrix a, const KernelMatrix& b) { return a += b; }
    friend KernelMatrix operator-(KernelMatrix a, const KernelMatrix& b) { return a -= b; }
    friend KernelMatrix operator*(KernelMatrix a, cd s) { return a *= s; }
    friend KernelMatrix operator*(cd s, KernelMatrix a) { return a *= s; }

    /// a += s·b without temporaries.
    void axpy(cd s, const KernelMatrix& b);

    double max_abs() const;
    /// max_abs restricted to rows and columns whose modes satisfy keep(mode).
    double max_abs_where(const std::function<bool(const WaveVector&)>& keep) const;
    double frobenius() const;
    /// Largest |M − M†| entry.
    double hermitian_defect() const;
    /// Smallest eigenvalue of the Hermitian part.
    double min_eigenvalue() const;
    /// f applied to the eigenvalues of a Hermitian matrix.
    KernelMatrix hermitian_function(const std::function<double(double)>& f) const;

    const std::vector<Eigen::MatrixXcd>& blocks() const { return blocks_; }
    std::vector<Eigen::MatrixXcd>& blocks() { return blocks_; }

private:
    KernelMatrix(Basis basis) : basis_(std::move(basis)) {}
    void check_same(const KernelMatrix& o) const;

    Basis basis_;
    std::vector<Eigen::MatrixXcd> blocks_;
};

/// The ⋄-contraction A⋄B.
KernelMatrix diamond(const KernelMatrix& a, const KernelMatrix& b);

}  // namespace spdcm
