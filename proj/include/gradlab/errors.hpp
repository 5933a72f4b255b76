#pragma once

#include <stdexcept>
#include <string>

namespace gradlab {

/// Base of every error raised by the library. `kind()` is a stable identifier
/// used in machine-readable reports.
class Error : public std::runtime_error {
 public:
  Error(std::string kind, const std::string& what)
      : std::runtime_error(kind + ": " + what), kind_(std::move(kind)) {}
  const std::string& kind() const { return kind_; }

 private:
  std::string kind_;
};

#define GRADLAB_ERROR(Name)                                                      \
  class Name : public Error {                                                    \
   public:                                                                       \
    explicit Name(const std::string& what) : Error(#Name, what) {}               \
  }

GRADLAB_ERROR(InvalidGroup);
GRADLAB_ERROR(InvalidHom);
GRADLAB_ERROR(NotEpimorphism);
GRADLAB_ERROR(InfiniteKernel);
GRADLAB_ERROR(GroupMismatch);
GRADLAB_ERROR(RingMismatch);
GRADLAB_ERROR(DegreeMismatch);
GRADLAB_ERROR(InvalidStructure);
GRADLAB_ERROR(InfiniteSupport);
GRADLAB_ERROR(NonHomogeneousInput);
GRADLAB_ERROR(GuardExceeded);
GRADLAB_ERROR(UnsupportedFamily);
GRADLAB_ERROR(UnsupportedClass);
GRADLAB_ERROR(UnsupportedField);
GRADLAB_ERROR(MalformedRule);
GRADLAB_ERROR(FiniteSubgroup);
GRADLAB_ERROR(SoundnessFailure);
GRADLAB_ERROR(ParseError);

#undef GRADLAB_ERROR

}  // namespace gradlab
