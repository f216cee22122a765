#pragma once

#include <map>
#include <string>

// Generated at configure time from data/modules/*.mod and data/scenarios/*.scn.
namespace tsb::data {

const std::map<std::string, std::string>& modules();
const std::map<std::string, std::string>& scenarios();

}  // namespace tsb::data
