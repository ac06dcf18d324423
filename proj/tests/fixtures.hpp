/*
 * Copyright 2026 The gectk Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *    http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#pragma once

#include <string_view>

namespace fixtures {

inline constexpr std::string_view kAlbinismSource =
    "The people with albinism have sensitive skin and it needs regular treatment .";
inline constexpr std::string_view kAlbinismTarget =
    "People with albinism have sensitive skin and this needs regular treatment .";

inline constexpr std::string_view kBombSource =
    "It is a concern that will be with us during our whole life , because we will never know when the '' "
    "potential bomb '' will explode .";

inline constexpr std::string_view kCelebritySource =
    "People can also know much information about the celebrity in Twitter and Facebook such as Obama , Bill "
    "Gates and get the first-hand study materials on it .";
inline constexpr std::string_view kCelebrityTarget =
    "People can also find out a great deal of information about celebrities from Twitter and Facebook such as "
    "Obama and Bill Gates and get first-hand study materials on these .";

// Annotator corrections for the celebrity sentence, in order.
inline constexpr std::string_view kCelebrityAnchoredScript =
    "Replace know much with find out a great deal of @3\n"
    "Delete the @7\n"
    "Replace celebrity with celebrities @8\n"
    "Replace in with from @9\n"
    "Replace , with and @16\n"
    "Delete the @21\n"
    "Replace it with these @26";

// The same list with the first correction split in two.
inline constexpr std::string_view kCelebritySplitScript =
    "Replace know with find out\n"
    "Replace much with a great deal of\n"
    "Delete the\n"
    "Replace celebrity with celebrities\n"
    "Replace in with from\n"
    "Replace , with and\n"
    "Delete the\n"
    "Replace it with these";

}  // namespace fixtures
