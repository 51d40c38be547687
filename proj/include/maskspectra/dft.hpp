#pragma once

#include <cmath>
#include <numbers>
#include <optional>
#include <vector>

#include "maskspectra/mask.hpp"
#include "maskspectra/types.hpp"

// Discrete Fourier transforms of arbitrary length.
//
// All transforms use the forward kernel exp(-j*2*pi*k*n/N) and sum over
// n = 0..N-1. Flipping the sign of the exponent conjugates every
// coefficient of a real input, so magnitudes are convention-independent.

namespace maskspectra
{
	template <typename Scalar>
	struct Spectrum
	{
		ComplexVectorX<Scalar> coeffs;
		// n_p of the transformed mask; empty for general signals.
		std::optional<Index> source_n_p;

		Index size() const { return coeffs.size(); }
		VectorX<Scalar> magnitudes() const { return coeffs.cwiseAbs(); }
	};

	namespace detail
	{
		// exp(-j*2*pi*r/n) for r in [0, n), evaluated in double.
		template <typename Scalar>
		ComplexVectorX<Scalar> unit_roots(Index n)
		{
			ComplexVectorX<Scalar> roots(n);
			for (Index r = 0; r < n; ++r)
			{
				const double angle = -2.0 * std::numbers::pi * static_cast<double>(r) / static_cast<double>(n);
				roots[r] = std::complex<Scalar>(static_cast<Scalar>(std::cos(angle)), static_cast<Scalar>(std::sin(angle)));
			}
			return roots;
		}

		inline bool is_power_of_two(Index n) { return n > 0 && (n & (n - 1)) == 0; }

		inline Index next_power_of_two(Index n)
		{
			Index m = 1;
			while (m < n)
				m <<= 1;
			return m;
		}

		template <typename Derived>
		using RealOf = typename Eigen::NumTraits<typename Derived::Scalar>::Real;

		template <typename Derived>
		ComplexVectorX<RealOf<Derived>> to_complex(const Eigen::MatrixBase<Derived> &input)
		{
			using Real = RealOf<Derived>;
			return input.derived().template cast<std::complex<Real>>();
		}
	} // namespace detail

	/// Reusable transform of a fixed length.
	///
	/// Power-of-two lengths run an iterative radix-2 transform; every other
	/// length (primes included) goes through Bluestein's chirp-z identity
	/// on a power-of-two convolution of size >= 2N-1. A plan is immutable
	/// after construction and may be shared between threads as long as each
	/// thread passes its own scratch buffer.
	template <typename Scalar>
	class FftPlan
	{
	public:
		using Complex = std::complex<Scalar>;
		using Buffer = ComplexVectorX<Scalar>;

		explicit FftPlan(Index n)
			: n_(n)
		{
			if (n < 1)
				throw InvalidArgument("FftPlan: length must be >= 1");
			if (detail::is_power_of_two(n))
			{
				m_ = n;
				twiddles_ = half_twiddles(m_);
				return;
			}
			m_ = detail::next_power_of_two(2 * n - 1);
			twiddles_ = half_twiddles(m_);

			// chirp[k] = exp(-j*pi*k^2/n); k^2 is reduced mod 2n in integers.
			chirp_.resize(n);
			const long long period = 2LL * n;
			for (Index k = 0; k < n; ++k)
			{
				const long long kk = (static_cast<long long>(k) * k) % period;
				const double angle = -std::numbers::pi * static_cast<double>(kk) / static_cast<double>(n);
				chirp_[k] = Complex(static_cast<Scalar>(std::cos(angle)), static_cast<Scalar>(std::sin(angle)));
			}
			kernel_spectrum_ = Buffer::Zero(m_);
			kernel_spectrum_[0] = std::conj(chirp_[0]);
			for (Index k = 1; k < n; ++k)
			{
				kernel_spectrum_[k] = std::conj(chirp_[k]);
				kernel_spectrum_[m_ - k] = std::conj(chirp_[k]);
			}
			radix2(kernel_spectrum_);
		}

		Index size() const { return n_; }
		Index scratch_size() const { return detail::is_power_of_two(n_) ? 0 : m_; }

		/// In-place forward transform. `scratch` is resized as needed.
		void forward(Buffer &data, Buffer &scratch) const
		{
			if (data.size() != n_)
				throw InvalidArgument("FftPlan::forward: buffer length does not match plan");
			if (m_ == n_)
			{
				radix2(data);
				return;
			}
			scratch.setZero(m_);
			scratch.head(n_) = data.cwiseProduct(chirp_);
			radix2(scratch);
			for (Index k = 0; k < m_; ++k)
			{
				const Complex x = scratch[k];
				const Complex w = kernel_spectrum_[k];
				scratch[k] = Complex(x.real() * w.real() - x.imag() * w.imag(), x.real() * w.imag() + x.imag() * w.real());
			}
			inverse_radix2(scratch);
			data = scratch.head(n_).cwiseProduct(chirp_);
		}

		void forward(Buffer &data) const
		{
			Buffer scratch;
			forward(data, scratch);
		}

		/// In-place inverse transform, normalized by 1/N.
		void inverse(Buffer &data, Buffer &scratch) const
		{
			data = data.conjugate().eval();
			forward(data, scratch);
			data = data.conjugate() / static_cast<Scalar>(n_);
		}

		void inverse(Buffer &data) const
		{
			Buffer scratch;
			inverse(data, scratch);
		}

	private:
		static Buffer half_twiddles(Index m)
		{
			const Buffer roots = detail::unit_roots<Scalar>(m);
			return roots.head(std::max<Index>(m / 2, 1));
		}

		void radix2(Buffer &a) const
		{
			const Index m = a.size();
			for (Index i = 1, j = 0; i < m; ++i)
			{
				Index bit = m >> 1;
				for (; j & bit; bit >>= 1)
					j ^= bit;
				j ^= bit;
				if (i < j)
					std::swap(a[i], a[j]);
			}
			for (Index len = 2; len <= m; len <<= 1)
			{
				const Index half = len / 2;
				const Index stride = m / len;
				for (Index start = 0; start < m; start += len)
				{
					for (Index j = 0; j < half; ++j)
					{
						// Written out to avoid the NaN-recovery path of operator*.
						const Complex u = a[start + j];
						const Complex x = a[start + j + half];
						const Complex w = twiddles_[j * stride];
						const Complex v(x.real() * w.real() - x.imag() * w.imag(), x.real() * w.imag() + x.imag() * w.real());
						a[start + j] = u + v;
						a[start + j + half] = u - v;
					}
				}
			}
		}

		void inverse_radix2(Buffer &a) const
		{
			a = a.conjugate().eval();
			radix2(a);
			a = a.conjugate() / static_cast<Scalar>(a.size());
		}

		Index n_;
		Index m_ = 0;
		Buffer twiddles_;
		Buffer chirp_;
		Buffer kernel_spectrum_;
	};

	/// O(N^2) reference transform with exact integer reduction of k*n mod N.
	template <typename Derived>
	Spectrum<detail::RealOf<Derived>> dft_direct(const Eigen::MatrixBase<Derived> &input)
	{
		using Real = detail::RealOf<Derived>;
		const Index n = input.size();
		if (n < 1)
			throw InvalidArgument("dft_direct: input must be non-empty");
		const ComplexVectorX<Real> x = detail::to_complex(input);
		const ComplexVectorX<Real> roots = detail::unit_roots<Real>(n);

		Spectrum<Real> out;
		out.coeffs = ComplexVectorX<Real>::Zero(n);
		for (Index k = 0; k < n; ++k)
		{
			std::complex<Real> acc(0, 0);
			for (Index t = 0; t < n; ++t)
				acc += x[t] * roots[static_cast<Index>((static_cast<long long>(k) * t) % n)];
			out.coeffs[k] = acc;
		}
		return out;
	}

	template <typename Derived>
	Spectrum<detail::RealOf<Derived>> dft_fast(const Eigen::MatrixBase<Derived> &input)
	{
		using Real = detail::RealOf<Derived>;
		if (input.size() < 1)
			throw InvalidArgument("dft_fast: input must be non-empty");
		Spectrum<Real> out;
		out.coeffs = detail::to_complex(input);
		FftPlan<Real>(input.size()).forward(out.coeffs);
		return out;
	}

	/// Inverse of dft_fast (normalized by 1/N).
	template <typename Derived>
	ComplexVectorX<detail::RealOf<Derived>> idft_fast(const Eigen::MatrixBase<Derived> &coeffs)
	{
		using Real = detail::RealOf<Derived>;
		if (coeffs.size() < 1)
			throw InvalidArgument("idft_fast: input must be non-empty");
		ComplexVectorX<Real> out = detail::to_complex(coeffs);
		FftPlan<Real>(coeffs.size()).inverse(out);
		return out;
	}

	inline Spectrum<double> dft_direct(const Mask &mask)
	{
		auto s = dft_direct(mask.as_vector<double>());
		s.source_n_p = mask.n_p();
		return s;
	}

	inline Spectrum<double> dft_fast(const Mask &mask)
	{
		auto s = dft_fast(mask.as_vector<double>());
		s.source_n_p = mask.n_p();
		return s;
	}

	template <typename Scalar>
	struct SpectralPeak
	{
		Index bin;
		Scalar value;
	};

	/// Largest magnitude over bins 1..N-1; ties resolve to the smallest bin.
	template <typename Scalar>
	SpectralPeak<Scalar> max_nonzero_bin(const Spectrum<Scalar> &s)
	{
		const Index n = s.size();
		if (n < 2)
			throw InvalidArgument("max_nonzero_bin: spectrum length must be >= 2");
		SpectralPeak<Scalar> peak{1, std::abs(s.coeffs[1])};
		for (Index k = 2; k < n; ++k)
		{
			const Scalar v = std::abs(s.coeffs[k]);
			if (v > peak.value)
				peak = {k, v};
		}
		return peak;
	}
} // namespace maskspectra
