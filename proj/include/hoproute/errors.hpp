#pragma once

#include <stdexcept>
#include <string>

namespace hoproute {

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct UnknownEdge : Error {
  using Error::Error;
};
struct DegenerateGraph : Error {
  using Error::Error;
};
struct InvalidEpsilon : Error {
  using Error::Error;
};
struct EmptyGraph : Error {
  using Error::Error;
};
struct BadDistribution : Error {
  using Error::Error;
};
struct NodeNotEmbedded : Error {
  using Error::Error;
};
struct RetriesExhausted : Error {
  using Error::Error;
};
struct NodePairInvalid : Error {
  using Error::Error;
};
struct SolverFailure : Error {
  using Error::Error;
};
struct TooLarge : Error {
  using Error::Error;
};
struct UnknownGenerator : Error {
  using Error::Error;
};
struct ParseError : Error {
  using Error::Error;
};

}  // namespace hoproute
