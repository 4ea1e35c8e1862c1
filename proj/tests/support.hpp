#pragma once

#include <atomic>
#include <filesystem>
#include <fstream>
#include <mutex>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "mwploc/error.hpp"
#include "mwploc/llmclient.hpp"

namespace testing {

inline std::filesystem::path source_dir() { return MWPLOC_SOURCE_DIR; }
inline std::filesystem::path golden_dir() { return source_dir() / "fixtures" / "golden_swa"; }
inline std::filesystem::path db_path() { return source_dir() / "data" / "entity_db.json"; }

// Golden Swahili walkthrough, stage by stage.
inline const std::string kEn =
    "Mandy owes Benedict $ 100. They agreed to have monthly interest of 2%. If Mandy was able to pay it after 3 "
    "months, how much should she give to Benedict?";
inline const std::string kTrans =
    "Mandy anadaiwa $ 100 na Benedict . Wamekubali kuwa na riba ya kila mwezi ya 2%. Ikiwa Mandy aliweza kulipa "
    "baada ya miezi 3, anafaa kumpa Benedict pesa ngapi?";
inline const std::string kEnt =
    "Camari owes Julani shilingi 100. They agreed to have monthly interest of 2%. If Camari was able to pay it "
    "after 3 months, how much should she give to Julani?";
inline const std::string kLoc =
    "Camari anadaiwa shilingi 100 na Julani . Wamekubali kuwa na riba ya kila mwezi ya 2%. Ikiwa Camari aliweza "
    "kulipa baada ya miezi 3, anafaa kumpa Julani pesa ngapi?";
inline const std::string kExtractReply =
    "```json\n{\"personal_names\":[\"Mandy\",\"Benedict\"],\"currencies\":[\"$\"], \"organization_names\":[]}\n```";

class TempDir {
 public:
  TempDir() {
    static std::atomic<unsigned> counter{0};
    std::random_device rd;
    path_ = std::filesystem::temp_directory_path() /
            ("mwploc-test-" + std::to_string(rd()) + "-" + std::to_string(counter++));
    std::filesystem::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;

  const std::filesystem::path& path() const { return path_; }
  std::filesystem::path operator/(const std::string& name) const { return path_ / name; }

 private:
  std::filesystem::path path_;
};

inline std::string read_file(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline void write_file(const std::filesystem::path& p, const std::string& bytes) {
  std::ofstream out(p, std::ios::binary);
  out << bytes;
}

/// Virtual time: sleeping advances the clock instantly.
class FakeClock : public mwploc::llm::Clock {
 public:
  TimePoint now() override {
    std::lock_guard lock(mu_);
    return now_;
  }
  void sleep_for(Duration d) override {
    std::lock_guard lock(mu_);
    sleeps.push_back(d.count());
    now_ += d;
  }
  void advance(double seconds) {
    std::lock_guard lock(mu_);
    now_ += Duration(seconds);
  }
  double seconds() {
    std::lock_guard lock(mu_);
    return now_.time_since_epoch().count();
  }

  std::vector<double> sleeps;

 private:
  std::mutex mu_;
  TimePoint now_{};
};

}  // namespace testing
