#pragma once

#include <stdexcept>
#include <string>

namespace twkde {

//! Base class for every error raised by the library.
class Error : public std::runtime_error
{
public:
  using std::runtime_error::runtime_error;
};

//! An argument lies outside the domain of the operation.
class DomainError : public Error
{
public:
  using Error::Error;
};

//! A truncated series did not reach its cutoff within the term cap.
class NonConvergence : public Error
{
public:
  using Error::Error;
};

//! The sample is too small for the requested operation (e.g. n < 2).
class DegenerateSample : public Error
{
public:
  using Error::Error;
};

//! The sample has no positive observations.
class AllZeros : public Error
{
public:
  using Error::Error;
};

class MissingDerivative : public Error
{
public:
  using Error::Error;
};

//! Curvature term vanishes, so the optimal bandwidth is undefined.
class DegenerateCurvature : public Error
{
public:
  using Error::Error;
};

class DivergentFunctional : public Error
{
public:
  using Error::Error;
};

//! The evaluation grid leaves too much target mass uncovered.
class GridTooNarrow : public Error
{
public:
  using Error::Error;
};

class GridMismatch : public Error
{
public:
  using Error::Error;
};

} // namespace twkde
