#pragma once

#include <stdexcept>
#include <string>

namespace rrg {

// Base for everything thrown by the library. Messages name the offending
// record, line, study id or parameter so failures are diagnosable from logs.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// corpus
struct UnreadableFile : Error { using Error::Error; };
struct MissingField : Error { using Error::Error; };
struct DuplicateStudyId : Error { using Error::Error; };
struct EmptyCorpus : Error { using Error::Error; };
struct EmptyTrainSplit : Error { using Error::Error; };

// metrics
struct InvalidN : Error { using Error::Error; };
struct LengthMismatch : Error { using Error::Error; };
struct EmptyInput : Error { using Error::Error; };

// labeler
struct EmptyLexicon : Error { using Error::Error; };
struct BadLexiconFile : Error { using Error::Error; };
struct AllDiseasesDegenerate : Error { using Error::Error; };

// baselines
struct EmptySplit : Error { using Error::Error; };
struct EmptyReportText : Error { using Error::Error; };
struct NotEnoughNormalSentences : Error { using Error::Error; };
struct NotEnoughSentences : Error { using Error::Error; };
struct NotEnoughWords : Error { using Error::Error; };
struct MissingFeatures : Error { using Error::Error; };
struct DimensionMismatch : Error { using Error::Error; };
struct EmptyImage : Error { using Error::Error; };

// harness
struct BadConfig : Error { using Error::Error; };

}  // namespace rrg
