// text-norm.cc

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

#include "qbe/text-norm.h"

#include <unicode/normalizer2.h>
#include <unicode/uchar.h>
#include <unicode/unistr.h>

#include "qbe/qbe-error.h"

namespace qbe {

namespace {

icu::UnicodeString Folded(std::string_view utf8) {
  UErrorCode status = U_ZERO_ERROR;
  const icu::Normalizer2 *nfc = icu::Normalizer2::getNFCInstance(status);
  if (U_FAILURE(status)) throw Error("ICU NFC normaliser unavailable");
  icu::UnicodeString text = icu::UnicodeString::fromUTF8(
      icu::StringPiece(utf8.data(), static_cast<int32_t>(utf8.size())));
  text.foldCase();
  icu::UnicodeString out = nfc->normalize(text, status);
  if (U_FAILURE(status)) throw Error("ICU normalisation failed");
  return out;
}

bool IsWordChar(UChar32 c) {
  if (u_isalnum(c)) return true;
  const int8_t type = u_charType(c);
  return type == U_NON_SPACING_MARK || type == U_COMBINING_SPACING_MARK ||
         type == U_ENCLOSING_MARK;
}

}  // namespace

std::string CaseFold(std::string_view utf8) {
  std::string out;
  Folded(utf8).toUTF8String(out);
  return out;
}

std::vector<std::string> Tokenize(std::string_view utf8) {
  const icu::UnicodeString text = Folded(utf8);
  std::vector<std::string> tokens;
  icu::UnicodeString current;
  auto flush = [&]() {
    if (current.isEmpty()) return;
    std::string s;
    current.toUTF8String(s);
    tokens.push_back(std::move(s));
    current.remove();
  };
  for (int32_t i = 0; i < text.length();) {
    const UChar32 c = text.char32At(i);
    if (IsWordChar(c)) current.append(c); else flush();
    i = text.moveIndex32(i, 1);
  }
  flush();
  return tokens;
}

}  // namespace qbe
