#include "spdcm/kernel_matrix.hpp"

#include "spdcm/error.hpp"

#include <Eigen/Eigenvalues>

#include <cmath>

namespace spdcm {

using Sector = SymmetryBasis::Sector;
using Kind = SymmetryBasis::Sector::Kind;

SymmetryBasis::SymmetryBasis(std::shared_ptr<const ModeGrid> grid, Symmetry sym)
    : grid_(std::move(grid)), sym_(sym) {
    const int N = grid_->size();
    const int n = grid_->n_k(), nw = grid_->n_omega();
    rows_.resize(N);
    if (sym == Symmetry::none) {
        Sector s;
        s.dim = N;
        s.kind = Kind::dense;
        Copy c;
        c.Q.resize(N, N);
        c.Q.setIdentity();
        s.copies.push_back(std::move(c));
        sectors_.push_back(std::move(s));
        for (int p = 0; p < N; ++p) rows_[p].push_back({0, p, 1.0, 0});
        return;
    }

    const int half = n / 2;
    const int ne = half + (n % 2), no = half;
    E_ = Eigen::MatrixXd::Zero(n, ne);
    O_ = Eigen::MatrixXd::Zero(n, no);
    const double r = 1.0 / std::sqrt(2.0);
    for (int i = 0; i < half; ++i) {
        E_(i, i) = r;
        E_(n - 1 - i, i) = r;
        O_(i, i) = r;
        O_(n - 1 - i, i) = -r;
    }
    if (n % 2) E_(half, ne - 1) = 1.0;

    auto make_sector = [&](Kind kind, const Eigen::MatrixXd& A, const Eigen::MatrixXd& B,
                           int na, int nb) {
        Sector s;
        s.kind = kind;
        for (int a = 0; a < na; ++a)
            for (int b = 0; b < nb; ++b) {
                bool keep = true;
                if (kind == Kind::ee_sym || kind == Kind::oo_sym) keep = a <= b;
                if (kind == Kind::ee_anti || kind == Kind::oo_anti) keep = a < b;
                if (keep) s.pairs.emplace_back(a, b);
            }
        const int np = static_cast<int>(s.pairs.size());
        s.dim = np * nw;
        if (s.dim == 0) return;
        int ncopies = (kind == Kind::eo) ? 2 : 1;
        for (int copy = 0; copy < ncopies; ++copy) {
            std::vector<Eigen::Triplet<double>> trip;
            for (int io = 0; io < nw; ++io)
                for (int t = 0; t < np; ++t) {
                    auto [a, b] = s.pairs[t];
                    int col = io * np + t;
                    for (int ix = 0; ix < n; ++ix)
                        for (int iy = 0; iy < n; ++iy) {
                            double v = 0;
                            switch (kind) {
                                case Kind::ee_sym:
                                case Kind::oo_sym: {
                                    double norm = (a == b) ? 0.5 : r;
                                    v = norm * (A(ix, a) * A(iy, b) + A(ix, b) * A(iy, a));
                                    break;
                                }
                                case Kind::ee_anti:
                                case Kind::oo_anti:
                                    v = r * (A(ix, a) * A(iy, b) - A(ix, b) * A(iy, a));
                                    break;
                                case Kind::eo:
                                    v = copy == 0 ? A(ix, a) * B(iy, b) : B(ix, b) * A(iy, a);
                                    break;
                                default:
                                    break;
                            }
                            if (v != 0.0) trip.emplace_back(grid_->index(ix, iy, io), col, v);
                        }
                }
            Copy c;
            c.Q.resize(N, s.dim);
            c.Q.setFromTriplets(trip.begin(), trip.end());
            c.Q.makeCompressed();
            s.copies.push_back(std::move(c));
        }
        sectors_.push_back(std::move(s));
    };
    make_sector(Kind::ee_sym, E_, E_, ne, ne);
    make_sector(Kind::ee_anti, E_, E_, ne, ne);
    make_sector(Kind::oo_sym, O_, O_, no, no);
    make_sector(Kind::oo_anti, O_, O_, no, no);
    make_sector(Kind::eo, E_, O_, ne, no);

    for (int s = 0; s < static_cast<int>(sectors_.size()); ++s)
        for (int c = 0; c < static_cast<int>(sectors_[s].copies.size()); ++c) {
            const auto& Q = sectors_[s].copies[c].Q;
            for (int j = 0; j < Q.outerSize(); ++j)
                for (Eigen::SparseMatrix<double>::InnerIterator it(Q, j); it; ++it)
                    rows_[it.row()].push_back({s, j, it.value(), c});
        }
}

KernelMatrix KernelMatrix::zero(Basis basis) {
    KernelMatrix m(basis);
    for (const auto& s : basis->sectors()) m.blocks_.push_back(Eigen::MatrixXcd::Zero(s.dim, s.dim));
    return m;
}

KernelMatrix KernelMatrix::identity(Basis basis) {
    KernelMatrix m(basis);
    for (const auto& s : basis->sectors())
        m.blocks_.push_back(Eigen::MatrixXcd::Identity(s.dim, s.dim));
    return m;
}

KernelMatrix KernelMatrix::from_function(
    Basis basis, const std::function<cd(const WaveVector&, const WaveVector&)>& fn) {
    const ModeGrid& g = basis->grid();
    const int N = g.size();
    std::vector<WaveVector> modes(N);
    std::vector<double> sw(N);
    for (int p = 0; p < N; ++p) {
        modes[p] = g.mode(p);
        sw[p] = std::sqrt(g.weight(p));
    }
    KernelMatrix m(basis);
    if (basis->symmetry() == Symmetry::none) {
        Eigen::MatrixXcd M(N, N);
        for (int q = 0; q < N; ++q)
            for (int p = 0; p < N; ++p) M(p, q) = sw[p] * fn(modes[p], modes[q]) * sw[q];
        m.blocks_.push_back(std::move(M));
        return m;
    }
    for (const auto& s : basis->sectors()) {
        const auto& Q = s.copies.front().Q;
        std::vector<std::vector<std::pair<int, double>>> cols(s.dim);
        for (int j = 0; j < Q.outerSize(); ++j)
            for (Eigen::SparseMatrix<double>::InnerIterator it(Q, j); it; ++it)
                cols[j].emplace_back(static_cast<int>(it.row()), it.value());
        Eigen::MatrixXcd B(s.dim, s.dim);
        for (int j = 0; j < s.dim; ++j)
            for (int i = 0; i < s.dim; ++i) {
                cd acc = 0;
                for (auto [p, cp] : cols[i])
                    for (auto [q, cq] : cols[j]) acc += cp * cq * sw[p] * fn(modes[p], modes[q]) * sw[q];
                B(i, j) = acc;
            }
        m.blocks_.push_back(std::move(B));
    }
    return m;
}

KernelMatrix KernelMatrix::from_separable(Basis basis, const SeparableFill& fill) {
    const ModeGrid& g = basis->grid();
    const int n = g.n_k(), nw = g.n_omega();
    const auto& wk = g.k_weights();
    const auto& wom = g.omega_weights();
    const double norm = 1.0 / std::pow(2 * kPi, 3);
    Eigen::VectorXd swk(n);
    for (int i = 0; i < n; ++i) swk[i] = std::sqrt(wk[i]);

    KernelMatrix m = zero(basis);
    Eigen::MatrixXcd G(n, n);
    const auto& E = basis->even_basis();
    const auto& O = basis->odd_basis();
    for (int io = 0; io < nw; ++io)
        for (int jo = 0; jo < nw; ++jo) {
            cd F = fill(io, jo, G);
            F *= std::sqrt(wom[io] * wom[jo]) * norm;
            Eigen::MatrixXcd Gw = swk.asDiagonal() * G * swk.asDiagonal();
            if (basis->symmetry() == Symmetry::none) {
                auto& M = m.blocks_[0];
                for (int ix = 0; ix < n; ++ix)
                    for (int iy = 0; iy < n; ++iy) {
                        int p = g.index(ix, iy, io);
                        for (int jx = 0; jx < n; ++jx) {
                            cd gx = F * Gw(ix, jx);
                            for (int jy = 0; jy < n; ++jy) M(p, g.index(jx, jy, jo)) = gx * Gw(iy, jy);
                        }
                    }
                continue;
            }
            Eigen::MatrixXcd ge = E.transpose() * Gw * E;
            Eigen::MatrixXcd go = O.transpose() * Gw * O;
            const double r = 1.0 / std::sqrt(2.0);
            for (std::size_t s = 0; s < basis->sectors().size(); ++s) {
                const auto& sec = basis->sectors()[s];
                const int np = static_cast<int>(sec.pairs.size());
                auto& B = m.blocks_[s];
                const Eigen::MatrixXcd& gm =
                    (sec.kind == Kind::oo_sym || sec.kind == Kind::oo_anti) ? go : ge;
                for (int u = 0; u < np; ++u) {
                    auto [c, dd] = sec.pairs[u];
                    for (int t = 0; t < np; ++t) {
                        auto [a, b] = sec.pairs[t];
                        cd v;
                        switch (sec.kind) {
                            case Kind::ee_sym:
                            case Kind::oo_sym: {
                                double nab = (a == b) ? 0.5 : r, ncd = (c == dd) ? 0.5 : r;
                                v = nab * ncd * 2.0 * (gm(a, c) * gm(b, dd) + gm(a, dd) * gm(b, c));
                                break;
                            }
                            case Kind::ee_anti:
                            case Kind::oo_anti:
                                v = gm(a, c) * gm(b, dd) - gm(a, dd) * gm(b, c);
                                break;
                            case Kind::eo:
                                v = ge(a, c) * go(b, dd);
                                break;
                            default:
                                break;
                        }
                        B(io * np + t, jo * np + u) = F * v;
                    }
                }
            }
        }
    return m;
}

KernelMatrix KernelMatrix::from_dense(Basis basis, const Eigen::MatrixXcd& absorbed) {
    KernelMatrix m(basis);
    for (const auto& s : basis->sectors()) {
        const auto& Q = s.copies.front().Q;
        Eigen::MatrixXcd Qc = Eigen::MatrixXd(Q).cast<cd>();
        m.blocks_.push_back(Qc.transpose() * absorbed * Qc);
    }
    return m;
}

cd KernelMatrix::at(int p, int q) const {
    cd acc = 0;
    for (const auto& a : basis_->row(p))
        for (const auto& b : basis_->row(q))
            if (a.sector == b.sector && a.copy == b.copy)
                acc += a.coeff * b.coeff * blocks_[a.sector](a.col, b.col);
    return acc;
}

cd KernelMatrix::kernel(int p, int q) const {
    const auto& g = grid();
    return at(p, q) / std::sqrt(g.weight(p) * g.weight(q));
}

Eigen::MatrixXcd KernelMatrix::to_dense() const {
    const int N = size();
    Eigen::MatrixXcd D = Eigen::MatrixXcd::Zero(N, N);
    for (std::size_t s = 0; s < blocks_.size(); ++s) {
        const auto& B = blocks_[s];
        for (const auto& copy : basis_->sectors()[s].copies) {
            const auto& Q = copy.Q;
            Eigen::MatrixXcd T = Eigen::MatrixXcd::Zero(N, B.cols());
            for (int i = 0; i < Q.outerSize(); ++i)
                for (Eigen::SparseMatrix<double>::InnerIterator it(Q, i); it; ++it)
                    T.row(it.row()) += it.value() * B.row(i);
            for (int j = 0; j < Q.outerSize(); ++j)
                for (Eigen::SparseMatrix<double>::InnerIterator it(Q, j); it; ++it)
                    D.col(it.row()) += it.value() * T.col(j);
        }
    }
    return D;
}

KernelMatrix KernelMatrix::adjoint() const {
    KernelMatrix m(basis_);
    for (const auto& b : blocks_) m.blocks_.push_back(b.adjoint());
    return m;
}

KernelMatrix KernelMatrix::transpose() const {
    KernelMatrix m(basis_);
    for (const auto& b : blocks_) m.blocks_.push_back(b.transpose());
    return m;
}

KernelMatrix KernelMatrix::conjugate() const {
    KernelMatrix m(basis_);
    for (const auto& b : blocks_) m.blocks_.push_back(b.conjugate());
    return m;
}

void KernelMatrix::check_same(const KernelMatrix& o) const {
    if (!basis_ || !o.basis_) throw DomainError("KernelMatrix: uninitialized operand");
    if (basis_ == o.basis_) return;
    if (basis_->symmetry() != o.basis_->symmetry() || !(basis_->grid() == o.basis_->grid()))
        throw DomainError("KernelMatrix: operands live on different grids");
}

KernelMatrix& KernelMatrix::operator+=(const KernelMatrix& o) {
    check_same(o);
    for (std::size_t s = 0; s < blocks_.size(); ++s) blocks_[s] += o.blocks_[s];
    return *this;
}

KernelMatrix& KernelMatrix::operator-=(const KernelMatrix& o) {
    check_same(o);
    for (std::size_t s = 0; s < blocks_.size(); ++s) blocks_[s] -= o.blocks_[s];
    return *this;
}

KernelMatrix& KernelMatrix::operator*=(cd s) {
    for (auto& b : blocks_) b *= s;
    return *this;
}

void KernelMatrix::axpy(cd s, const KernelMatrix& b) {
    check_same(b);
    for (std::size_t i = 0; i < blocks_.size(); ++i) blocks_[i] += s * b.blocks_[i];
}

// Row by row, without forming the dense matrix. Matrices on a D4 basis are
// invariant under the group, so rows of one fundamental domain cover every
// entry modulus.
double KernelMatrix::max_abs() const {
    const ModeGrid& g = grid();
    const int N = size(), n = g.n_k();
    const bool d4 = basis_->symmetry() == Symmetry::d4;
    Eigen::VectorXcd acc(N);
    double mx = 0;
    for (int p = 0; p < N; ++p) {
        if (d4) {
            int ix, iy, io;
            g.decompose(p, ix, iy, io);
            if (2 * ix < n - 1 || ix > iy) continue;
        }
        acc.setZero();
        for (const auto& e : basis_->row(p)) {
            const auto& B = blocks_[e.sector];
            const auto& Q = basis_->sectors()[e.sector].copies[e.copy].Q;
            for (int j = 0; j < Q.outerSize(); ++j) {
                const cd v = e.coeff * B(e.col, j);
                for (Eigen::SparseMatrix<double>::InnerIterator it(Q, j); it; ++it)
                    acc(it.row()) += it.value() * v;
            }
        }
        mx = std::max(mx, acc.cwiseAbs().maxCoeff());
    }
    return mx;
}

double KernelMatrix::max_abs_where(const std::function<bool(const WaveVector&)>& keep) const {
    std::vector<int> modes;
    for (int p = 0; p < size(); ++p)
        if (keep(grid().mode(p))) modes.push_back(p);
    double mx = 0;
    for (int p : modes)
        for (int q : modes) mx = std::max(mx, std::abs(at(p, q)));
    return mx;
}

double KernelMatrix::frobenius() const {
    double acc = 0;
    for (std::size_t s = 0; s < blocks_.size(); ++s)
        acc += basis_->sectors()[s].copies.size() * blocks_[s].squaredNorm();
    return std::sqrt(acc);
}

double KernelMatrix::hermitian_defect() const { return (*this - adjoint()).max_abs(); }

double KernelMatrix::min_eigenvalue() const {
    double mn = std::numeric_limits<double>::infinity();
    for (const auto& b : blocks_) {
        Eigen::MatrixXcd h = 0.5 * (b + b.adjoint());
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(h, Eigen::EigenvaluesOnly);
        mn = std::min(mn, es.eigenvalues().minCoeff());
    }
    return mn;
}

KernelMatrix KernelMatrix::hermitian_function(const std::function<double(double)>& f) const {
    KernelMatrix m(basis_);
    for (const auto& b : blocks_) {
        Eigen::MatrixXcd h = 0.5 * (b + b.adjoint());
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(h);
        Eigen::VectorXd fv = es.eigenvalues().unaryExpr(f);
        m.blocks_.push_back(es.eigenvectors() * fv.asDiagonal() * es.eigenvectors().adjoint());
    }
    return m;
}

KernelMatrix diamond(const KernelMatrix& a, const KernelMatrix& b) {
    KernelMatrix out = KernelMatrix::zero(a.basis());
    if (a.basis() != b.basis() &&
        (a.basis()->symmetry() != b.basis()->symmetry() || !(a.grid() == b.grid())))
        throw DomainError("diamond: operands live on different grids");
    for (std::size_t s = 0; s < a.blocks().size(); ++s)
        out.blocks()[s].noalias() = a.blocks()[s] * b.blocks()[s];
    return out;
}

}  // namespace spdcm
