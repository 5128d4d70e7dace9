#pragma once

#include <string>
#include <vector>

namespace paradiag {

// Deterministic formatting for CSV fields: scientific with 9 significant
// digits, '.' decimal separator, no locale dependence.
std::string format_double(double v);
std::string format_int(long v);

/* RFC-4180 writer: header + rows, CRLF line endings, fields quoted only when
 * they contain a comma, quote, or newline. The file is written to <path>.tmp
 * and renamed into place so a failed run never leaves a partial CSV behind.
 */
void emit_csv(const std::string& path, const std::vector<std::string>& header,
              const std::vector<std::vector<std::string>>& rows);

}  // namespace paradiag
