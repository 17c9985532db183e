// qbe/text-norm.h

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

#ifndef QBE_TEXT_NORM_H_
#define QBE_TEXT_NORM_H_

#include <string>
#include <string_view>
#include <vector>

namespace qbe {

// NFC-normalised Unicode full case folding of UTF-8 text.
std::string CaseFold(std::string_view utf8);

/// Case-folded tokens of `utf8`. Letters, digits and combining marks form
/// tokens; whitespace, punctuation and symbols separate them.
std::vector<std::string> Tokenize(std::string_view utf8);

}  // namespace qbe

#endif  // QBE_TEXT_NORM_H_
