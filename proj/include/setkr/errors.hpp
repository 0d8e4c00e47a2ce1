#pragma once

#include <stdexcept>
#include <string>

namespace setkr {

// Base class for all engine errors. Parsing problems are reported as
// Diagnostic values, not exceptions; everything else throws one of these.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// A set operation received an atom or tuple where a set was required.
struct NonSetOperand : Error {
  using Error::Error;
};

// A value would exceed the configured size or nesting limits.
struct SizeLimitExceeded : Error {
  using Error::Error;
};

// Schema grounding was asked for a concept with no known extent.
struct MissingExtent : Error {
  using Error::Error;
};

// Two definitions share the same target name.
struct DuplicateDefinition : Error {
  using Error::Error;
};

// An operator application could not be resolved against a table entry,
// a definition body, or a built-in.
struct PartialOperator : Error {
  using Error::Error;
};
using UndefinedOperatorApplication = PartialOperator;

// A term mentions a name the interpretation does not bind.
struct UnboundName : Error {
  using Error::Error;
};

// A knowledge base outside the database fragment was passed to the
// fact-lookup query path.
struct FragmentViolation : Error {
  using Error::Error;
};

// A quantifier or comprehension body mentions a concept other than the
// one it ranges over.
struct BodyMentionsForeignConcept : Error {
  using Error::Error;
};

// A role name was used in a description-logic expression without being
// declared.
struct UndeclaredRole : Error {
  using Error::Error;
};

// Definitions form a cycle outside the replacement discipline.
struct RecursiveDefinition : Error {
  using Error::Error;
};

// An arithmetic built-in received a value that does not encode a natural
// number.
struct NonNumericOperand : Error {
  using Error::Error;
};

}  // namespace setkr
