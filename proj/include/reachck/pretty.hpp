#pragma once

#include <string>

#include "reachck/core.hpp"

namespace reachck {

struct PrettyOptions {
  bool raw_names = false;  // keep the uniqueness suffix of binders
  bool unicode = false;    // print the fresh marker as a diamond instead of *
};

std::string show(const Qual& q, const PrettyOptions& o = {});
std::string show(const TypeP& T, const PrettyOptions& o = {});
std::string show(const QType& Q, const PrettyOptions& o = {});
std::string show(const TermP& t, const PrettyOptions& o = {});

}  // namespace reachck
