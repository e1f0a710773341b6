#pragma once

#include <stdexcept>
#include <string>

namespace authorprint {

// Every failure raised by the library derives from Error so batch drivers can
// report it per input without aborting.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

#define AUTHORPRINT_ERROR(Name)              \
  class Name : public Error {                \
   public:                                   \
    using Error::Error;                      \
  }

AUTHORPRINT_ERROR(SchemaError);
AUTHORPRINT_ERROR(ReferenceError);
AUTHORPRINT_ERROR(UnknownNode);
AUTHORPRINT_ERROR(EmptyGraph);
AUTHORPRINT_ERROR(AlphaOutOfRange);
AUTHORPRINT_ERROR(NoMainActivity);
AUTHORPRINT_ERROR(EmptyPrimaryModule);
AUTHORPRINT_ERROR(CategoryMismatch);
AUTHORPRINT_ERROR(EmptyVocabulary);
AUTHORPRINT_ERROR(DimensionOverflow);
AUTHORPRINT_ERROR(SingleClass);
AUTHORPRINT_ERROR(NonFiniteInput);
AUTHORPRINT_ERROR(ShapeMismatch);
AUTHORPRINT_ERROR(VersionMismatch);
AUTHORPRINT_ERROR(CorruptArtifact);
AUTHORPRINT_ERROR(EmptyResult);
AUTHORPRINT_ERROR(KTooLarge);
AUTHORPRINT_ERROR(LengthMismatch);
AUTHORPRINT_ERROR(IoError);

#undef AUTHORPRINT_ERROR

}  // namespace authorprint
