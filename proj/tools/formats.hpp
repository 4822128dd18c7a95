#pragma once

#include <string_view>

namespace ethlab::cli {

/// Contents of FORMATS.md, printed by `ethlab formats`.
std::string_view formats_text();

}  // namespace ethlab::cli
