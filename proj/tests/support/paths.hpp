#pragma once
#include <string>

#ifndef QTT_SOURCE_DIR
#error "QTT_SOURCE_DIR must be defined by the build"
#endif

inline std::string source_path(const std::string& rel) { return std::string(QTT_SOURCE_DIR) + "/" + rel; }
