#pragma once

#include <stdexcept>
#include <string>

namespace envmm {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

#define ENVMM_DEFINE_ERROR(Name)                                  \
  class Name : public Error {                                      \
   public:                                                         \
    explicit Name(const std::string& what) : Error(#Name ": " + what) {} \
  }

ENVMM_DEFINE_ERROR(InvalidInput);
ENVMM_DEFINE_ERROR(ShapeMismatch);
ENVMM_DEFINE_ERROR(BadTruncation);
ENVMM_DEFINE_ERROR(DegenerateSpec);
ENVMM_DEFINE_ERROR(BadConfig);
ENVMM_DEFINE_ERROR(BadGrid);
ENVMM_DEFINE_ERROR(WrongDimension);
ENVMM_DEFINE_ERROR(NotCoercive);
ENVMM_DEFINE_ERROR(EmbeddingNotPSD);

#undef ENVMM_DEFINE_ERROR

}  // namespace envmm
