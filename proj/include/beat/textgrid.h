#pragma once

#include "beat/motion.h"

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

namespace beat {

// Praat TextGrid, long or short text form. Uses the interval tier named
// "words" (case-insensitive) or, failing that, the first interval tier.
// Empty-text intervals become kPadToken entries.
AlignedTranscript parse_textgrid(std::string_view text);

// Long-form TextGrid with a single "words" tier; PAD entries are written as "".
std::string write_textgrid(const AlignedTranscript& transcript);

// Throws beat::DataMismatch if entries are unsorted, overlap or are empty.
void validate_transcript(const AlignedTranscript& transcript);

// Frame i gets the token whose [start, end) contains (i + 0.5) / fps, or PAD.
std::vector<std::string> frame_words(const AlignedTranscript& transcript, double fps,
                                     std::size_t frames);

}  // namespace beat
