#pragma once

#include <string_view>

namespace eosim::bundled {

// data/gaas_membrane_10K.disp
extern const std::string_view kDefaultDispersion;
// presets/mzi_paper.pic
extern const std::string_view kPaperPreset;

}  // namespace eosim::bundled
