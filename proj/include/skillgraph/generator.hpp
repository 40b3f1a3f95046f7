#pragma once

#include <functional>
#include <optional>
#include <string>

namespace skillgraph::llm {

// Chat-style generation service behind the wire contract
//   POST {system, user, max_tokens} -> {text}.
// Returns nullopt on timeout or transport failure.
class GeneratorClient {
public:
    virtual ~GeneratorClient() = default;
    virtual std::optional<std::string> generate(const std::string& system,
                                                const std::string& user, int max_tokens) = 0;
    virtual std::string name() const = 0;
};

// Deterministic in-process stub driven by a handler; tests and offline eval
// plug canned or prompt-derived responses here.
class ScriptedGenerator final : public GeneratorClient {
public:
    using Handler =
        std::function<std::optional<std::string>(const std::string& system,
                                                 const std::string& user)>;
    explicit ScriptedGenerator(Handler handler) : handler_(std::move(handler)) {}

    std::optional<std::string> generate(const std::string& system, const std::string& user,
                                        int) override {
        return handler_(system, user);
    }
    std::string name() const override { return "scripted-stub"; }

private:
    Handler handler_;
};

}  // namespace skillgraph::llm
