#pragma once

#include <stdexcept>
#include <string>

namespace ustlocal {

// Base for every error raised by the library. Each spec'd failure mode gets
// its own subclass so callers can catch exactly what they expect.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

#define USTLOCAL_DEFINE_ERROR(Name)          \
  class Name : public Error {                \
   public:                                   \
    explicit Name(const std::string& what)   \
        : Error(#Name ": " + what) {}        \
  }

USTLOCAL_DEFINE_ERROR(DisconnectedGraph);
USTLOCAL_DEFINE_ERROR(NonPositiveConductance);
USTLOCAL_DEFINE_ERROR(VertexOutOfRange);
USTLOCAL_DEFINE_ERROR(InvalidParams);
USTLOCAL_DEFINE_ERROR(GenerationTimeout);
USTLOCAL_DEFINE_ERROR(CycleInA);
USTLOCAL_DEFINE_ERROR(DisconnectsGraph);
USTLOCAL_DEFINE_ERROR(NotAnEdge);
USTLOCAL_DEFINE_ERROR(SingularSystem);
USTLOCAL_DEFINE_ERROR(LimitExceeded);
USTLOCAL_DEFINE_ERROR(ParseError);

#undef USTLOCAL_DEFINE_ERROR

}  // namespace ustlocal
