// qbe/qbe-error.h

// Copyright 2026  The qbe-kws Authors

// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0
//
// THIS CODE IS PROVIDED *AS IS* BASIS, WITHOUT WARRANTIES OR CONDITIONS OF ANY
// KIND, EITHER EXPRESS OR IMPLIED, INCLUDING WITHOUT LIMITATION ANY IMPLIED
// WARRANTIES OR CONDITIONS OF TITLE, FITNESS FOR A PARTICULAR PURPOSE,
// MERCHANTABLITY OR NON-INFRINGEMENT.
// See the Apache 2 License for the specific language governing permissions and
// limitations under the License.

#ifndef QBE_QBE_ERROR_H_
#define QBE_QBE_ERROR_H_

#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace qbe {

// Root of every exception thrown by the library. Anything that is not a
// DataError is a runtime failure (I/O, internal invariant).
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// The inputs are invalid: bad files, inconsistent manifests, unsatisfiable
// requests. The CLI maps these to exit status 3.
class DataError : public Error {
 public:
  using Error::Error;
};

class FeatureFileError : public DataError {
 public:
  enum class Kind {
    kMissingFile,
    kBadMagic,
    kVersionMismatch,
    kTruncated,
    kNonFinite,
    kMalformed,
    kIo,
  };
  FeatureFileError(Kind kind, const std::string &msg)
      : DataError(msg), kind_(kind) {}
  Kind kind() const { return kind_; }

 private:
  Kind kind_;
};

class ManifestError : public DataError {
 public:
  enum class Kind {
    kMissingFile,
    kParse,
    kDuplicateId,
    kBadSpan,
    kOverlappingSpans,
    kUnresolvedPath,
    kSourceMismatch,
    kMissingLayer,
    kUnknownRecording,
    kBadQuery,
  };
  ManifestError(Kind kind, const std::string &msg,
                std::vector<std::string> ids = {})
      : DataError(msg), kind_(kind), ids_(std::move(ids)) {}
  Kind kind() const { return kind_; }
  // Recording or query ids the error refers to, when there are any.
  const std::vector<std::string> &ids() const { return ids_; }

 private:
  Kind kind_;
  std::vector<std::string> ids_;
};

class WavError : public DataError {
 public:
  enum class Kind { kMissingFile, kMalformed, kUnsupportedCodec };
  WavError(Kind kind, const std::string &msg) : DataError(msg), kind_(kind) {}
  Kind kind() const { return kind_; }

 private:
  Kind kind_;
};

}  // namespace qbe

#endif  // QBE_QBE_ERROR_H_
