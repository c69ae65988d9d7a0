#pragma once

#include <string>

namespace tubelab::log {

// Reads TUBELAB_LOG (error|warn|info|debug, default warn); output goes to stderr.
void init();
void debug(const std::string& msg);
void info(const std::string& msg);
void warn(const std::string& msg);
void error(const std::string& msg);

}  // namespace tubelab::log
