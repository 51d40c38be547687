#pragma once

#include <complex>
#include <cstdint>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace maskspectra
{
	using Index = Eigen::Index;

	template <typename Scalar>
	using VectorX = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

	template <typename Scalar>
	using ComplexVectorX = Eigen::Matrix<std::complex<Scalar>, Eigen::Dynamic, 1>;

	using BitVector = Eigen::Matrix<std::uint8_t, Eigen::Dynamic, 1>;

	// Raised when an argument violates an operation's precondition.
	class InvalidArgument : public std::invalid_argument
	{
	public:
		using std::invalid_argument::invalid_argument;
	};

	// Raised for failures that are not caller errors (I/O, resources).
	class RuntimeFailure : public std::runtime_error
	{
	public:
		using std::runtime_error::runtime_error;
	};
} // namespace maskspectra
