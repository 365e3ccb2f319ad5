#pragma once

#include <stdexcept>
#include <string>

namespace clstk {

// All library failures derive from Error so callers can catch one base.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

#define CLSTK_DEFINE_ERROR(Name)                                  \
  class Name : public Error {                                     \
   public:                                                        \
    explicit Name(const std::string& msg) : Error(#Name ": " + msg) {} \
  }

CLSTK_DEFINE_ERROR(InvalidEncoding);
CLSTK_DEFINE_ERROR(EmptyInput);
CLSTK_DEFINE_ERROR(UnsupportedScript);
CLSTK_DEFINE_ERROR(OrphanCombiningMark);
CLSTK_DEFINE_ERROR(UnmappedCodepoint);
CLSTK_DEFINE_ERROR(UnknownRuleName);
CLSTK_DEFINE_ERROR(NoNucleus);
CLSTK_DEFINE_ERROR(UnknownLabel);
CLSTK_DEFINE_ERROR(UnknownCompactChar);
CLSTK_DEFINE_ERROR(UnknownCmuPhone);
CLSTK_DEFINE_ERROR(NonLatinInput);
CLSTK_DEFINE_ERROR(DegenerateCorpus);
CLSTK_DEFINE_ERROR(EmptyCorpus);
CLSTK_DEFINE_ERROR(ModelFormatError);
CLSTK_DEFINE_ERROR(ScriptMismatch);
CLSTK_DEFINE_ERROR(VocabTooSmall);
CLSTK_DEFINE_ERROR(UnknownTokenId);
CLSTK_DEFINE_ERROR(FileNotFound);
CLSTK_DEFINE_ERROR(FormatError);
CLSTK_DEFINE_ERROR(DuplicateUttId);
CLSTK_DEFINE_ERROR(EmptyReference);
CLSTK_DEFINE_ERROR(MissingTranslitModel);

#undef CLSTK_DEFINE_ERROR

}  // namespace clstk
