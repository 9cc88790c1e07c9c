#pragma once

#include "whk/error.hpp"

#include <Eigen/Dense>

#include <complex>
#include <cstdint>
#include <random>
#include <vector>

namespace whk {

using cplx = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;

// Relative threshold for every PSD / zero decision, scaled by the largest
// absolute eigenvalue of the operator under test.
inline constexpr double kDefaultTol = 1e-9;

struct Dims {
	int a = 2;
	int b = 2;

	int total() const { return a * b; }
	bool operator==(const Dims&) const = default;

	// Throws invalid_argument unless both factors are at least 2.
	void validate() const;
};

// Dense Hermitian matrix on C^a (x) C^b. Construction checks Hermiticity and
// stores the exactly symmetrized matrix, so every instance is Hermitian to
// the last bit.
class HermitianOperator {
	public:
		HermitianOperator(Dims dims, Matrix entries);

		static HermitianOperator zero(Dims dims);
		static HermitianOperator identity(Dims dims);
		static HermitianOperator projector(Dims dims, const Vector& v);

		const Dims& dims() const { return dims_; }
		const Matrix& matrix() const { return m_; }
		int size() const { return static_cast<int>(m_.rows()); }

		double trace() const { return m_.trace().real(); }
		// tr(A B) for Hermitian A, B.
		double pairing(const HermitianOperator& other) const;
		double expectation(const Vector& v) const;
		double frobenius_norm() const { return m_.norm(); }
		double max_abs_entry() const;

		HermitianOperator operator+(const HermitianOperator& o) const;
		HermitianOperator operator-(const HermitianOperator& o) const;
		HermitianOperator operator*(double s) const;
		HermitianOperator operator-() const { return *this * -1.0; }

	private:
		struct trusted_t {};
		HermitianOperator(Dims dims, Matrix entries, trusted_t);

		Dims dims_;
		Matrix m_;
};

inline HermitianOperator operator*(double s, const HermitianOperator& op) { return op * s; }

double frobenius_distance(const HermitianOperator& x, const HermitianOperator& y);
void require_same_dims(const HermitianOperator& x, const HermitianOperator& y);

struct Spectrum {
	Eigen::VectorXd values;  // ascending
	Matrix vectors;          // columns, orthonormal

	double min() const { return values(0); }
	double max() const { return values(values.size() - 1); }
	double max_abs() const { return values.cwiseAbs().maxCoeff(); }
	Vector ground() const { return vectors.col(0); }
};

// Normalized pair (e, f) representing |e> (x) |f>.
struct ProductVector {
	Vector e;
	Vector f;

	// Normalizes both factors; throws on a zero factor.
	static ProductVector make(Vector e, Vector f);
	static ProductVector basis(Dims dims, int i, int j);

	Dims dims() const { return Dims{static_cast<int>(e.size()), static_cast<int>(f.size())}; }
	Vector vector() const;
	// |e, f*>, the image of this vector under partial transposition on B.
	Vector conjugated_vector() const;
	HermitianOperator projector() const;
};

Vector kron(const Vector& x, const Vector& y);
Matrix kron(const Matrix& x, const Matrix& y);

HermitianOperator partial_transpose(const HermitianOperator& op);
HermitianOperator partial_transpose_a(const HermitianOperator& op);

Spectrum spectrum(const HermitianOperator& op);
Eigen::VectorXd eigenvalues(const HermitianOperator& op);
double min_eigenvalue(const HermitianOperator& op);

// Absolute threshold tol * max|eig| used for PSD / rank decisions.
double scaled_tolerance(const Spectrum& s, double tol = kDefaultTol);
bool is_psd(const HermitianOperator& op, double tol = kDefaultTol);

HermitianOperator range_projector(const HermitianOperator& op, double rank_tol = kDefaultTol);
HermitianOperator pseudo_inverse(const HermitianOperator& op, double rank_tol = kDefaultTol);
// Orthonormal basis (columns) of the numerical range of a PSD operator.
Matrix range_basis(const HermitianOperator& op, double rank_tol = kDefaultTol);
// Clips negative eigenvalues to zero.
HermitianOperator psd_part(const HermitianOperator& op);

// Schmidt coefficients (descending) of a pure bipartite vector.
Eigen::VectorXd schmidt_coefficients(Dims dims, const Vector& v);

enum class Ensemble { gue, state, product_state, npt_state };

HermitianOperator random_hermitian(Dims dims, std::uint64_t seed, Ensemble ensemble);

// Seeded generator with the complex Gaussian helpers used across the library.
class Rng {
	public:
		explicit Rng(std::uint64_t seed);

		double normal() { return normal_(engine_); }
		double uniform() { return uniform_(engine_); }
		Vector complex_gaussian(int n);
		Vector unit_vector(int n);
		Matrix ginibre(int rows, int cols);
		ProductVector product_vector(Dims dims);
		std::mt19937_64& engine() { return engine_; }

	private:
		std::mt19937_64 engine_;
		std::normal_distribution<double> normal_{0.0, 1.0};
		std::uniform_real_distribution<double> uniform_{0.0, 1.0};
};

// splitmix64 finalizer, used to derive independent per-task seeds.
std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t stream);

}  // namespace whk
