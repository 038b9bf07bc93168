#pragma once

#include <string>
#include <vector>

namespace lithoqed {

struct Preset {
    std::string name;
    std::string summary;
    std::string text;  // INI config
};

const std::vector<Preset>& presets();
// nullptr when unknown
const Preset* find_preset(const std::string& name);

}  // namespace lithoqed
