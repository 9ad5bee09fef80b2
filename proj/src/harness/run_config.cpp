#include "cwknn/harness/run_config.hpp"

#include <charconv>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "cwknn/error.hpp"

namespace cwknn::harness {
namespace {

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  return std::string(s.substr(b, e - b + 1));
}

double parse_sigma(const std::string& text, const std::string& entry) {
  double v = 0.0;
  const auto* end = text.data() + text.size();
  const auto [ptr, ec] = std::from_chars(text.data(), end, v);
  if (ec != std::errc() || ptr != end || !(v > 0.0)) {
    throw Error(ErrorCode::InvalidArgument, "bad sigma '" + text + "' in scheme '" + entry + "'");
  }
  return v;
}

}  // namespace

void RunConfig::validate() const {
  if (train_images.empty() || train_labels.empty()) {
    throw Error(ErrorCode::InvalidArgument, "train images and labels are required");
  }
  if (trials < 1) throw Error(ErrorCode::InvalidArgument, "trials must be at least 1");
  if (!repeated_trials() && (test_images.empty() || test_labels.empty())) {
    throw Error(ErrorCode::InvalidArgument, "test images and labels are required unless trials > 1");
  }
  if (repeated_trials() && test_subset == 0) {
    throw Error(ErrorCode::InvalidArgument, "repeated trials need --test-subset (held-out count per trial)");
  }
  if (workers < 1) throw Error(ErrorCode::InvalidArgument, "workers must be at least 1");
  if (k_max < 1) throw Error(ErrorCode::InvalidArgument, "k-max must be at least 1");
  cwssim.validate();
  parse_schemes(schemes, k_max, truncate_at);
}

std::vector<VoteScheme> parse_schemes(const std::string& list, std::size_t k_max,
                                      std::optional<std::size_t> truncate_at) {
  std::vector<VoteScheme> out;
  std::stringstream ss(list);
  std::string entry;
  while (std::getline(ss, entry, ',')) {
    entry = trim(entry);
    if (entry.empty()) continue;
    if (entry == "unweighted") {
      for (std::size_t k = 1; k <= k_max; ++k) out.emplace_back(Unweighted{k});
    } else if (entry == "weighted") {
      for (std::size_t k = 1; k <= k_max; ++k) out.emplace_back(ScoreWeighted{k});
    } else if (entry.rfind("exp:", 0) == 0 || entry.rfind("gauss:", 0) == 0) {
      const bool exponential = entry[0] == 'e';
      std::stringstream sigmas(entry.substr(entry.find(':') + 1));
      std::string sigma;
      bool any = false;
      while (std::getline(sigmas, sigma, ':')) {
        Decayed d{exponential ? DecayKind::Exponential : DecayKind::Gaussian, parse_sigma(trim(sigma), entry),
                  truncate_at};
        out.emplace_back(d);
        any = true;
      }
      if (!any) throw Error(ErrorCode::InvalidArgument, "scheme '" + entry + "' lists no sigma");
    } else {
      throw Error(ErrorCode::InvalidArgument, "unknown vote scheme '" + entry + "'");
    }
  }
  if (out.empty()) throw Error(ErrorCode::InvalidArgument, "no vote schemes given");
  for (const auto& s : out) validate(s);
  return out;
}

std::vector<std::string> config_file_arguments(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::Io, "cannot open config file " + path.string());
  std::vector<std::string> args;
  std::string line;
  std::size_t number = 0;
  while (std::getline(in, line)) {
    ++number;
    const std::string text = trim(line);
    if (text.empty() || text[0] == '#') continue;
    const auto eq = text.find('=');
    if (eq == std::string::npos) {
      throw Error(ErrorCode::InvalidArgument, path.string() + ":" + std::to_string(number) + ": expected key = value");
    }
    const std::string key = trim(text.substr(0, eq));
    const std::string value = trim(text.substr(eq + 1));
    if (key.empty()) throw Error(ErrorCode::InvalidArgument, path.string() + ":" + std::to_string(number) + ": empty key");
    if (value == "false") continue;
    args.push_back("--" + key);
    if (value != "true") args.push_back(value);
  }
  return args;
}

std::uint64_t fnv1a(std::string_view bytes, std::uint64_t hash) {
  for (unsigned char c : bytes) {
    hash ^= c;
    hash *= 0x100000001b3ull;
  }
  return hash;
}

std::string hex64(std::uint64_t v) {
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(v));
  return buf;
}

}  // namespace cwknn::harness
