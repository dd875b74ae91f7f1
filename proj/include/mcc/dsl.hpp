#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "mcc/error.hpp"

namespace mcc {

/// Abstract time units. Contract values are non-negative integers.
using Time = std::int64_t;

/// `service.method(args)`; args are kept verbatim.
struct MethodRef {
  std::string service;
  std::string method;
  std::string args;
  SourcePos pos;

  std::string str() const { return service + "." + method + "(" + args + ")"; }
  bool same_method(const MethodRef& o) const { return service == o.service && method == o.method; }
  friend bool operator==(const MethodRef&, const MethodRef&) = default;
};

struct TaskStep {
  std::string name;
  std::string resource_type;
  Time wcet = 0;
  Time bcet = 0;
  SourcePos pos;
  friend bool operator==(const TaskStep&, const TaskStep&) = default;
};

enum class CallKind { Rpc, Signal };

struct CallStep {
  CallKind kind = CallKind::Rpc;
  MethodRef target;
  friend bool operator==(const CallStep&, const CallStep&) = default;
};

using Step = std::variant<TaskStep, CallStep>;

struct RpcEntry {
  MethodRef method;
  friend bool operator==(const RpcEntry&, const RpcEntry&) = default;
};
struct Initialization {
  friend bool operator==(const Initialization&, const Initialization&) = default;
};
struct TimeActivation {
  Time period = 0;
  Time jitter = 0;
  friend bool operator==(const TimeActivation&, const TimeActivation&) = default;
};

using Activation = std::variant<RpcEntry, Initialization, TimeActivation>;

struct Thread {
  std::string name;
  Activation activation;
  std::vector<Step> steps;
  SourcePos pos;
  friend bool operator==(const Thread&, const Thread&) = default;
};

struct TimingReq {
  Time bound = 0;
  /// Either a method (latency of the call / entry) or a thread name.
  std::variant<MethodRef, std::string> target;
  SourcePos pos;

  std::string target_str() const;
  friend bool operator==(const TimingReq&, const TimingReq&) = default;
};

/// `not forbidden until prerequisite`
struct NotUntilReq {
  MethodRef forbidden;
  MethodRef prerequisite;
  SourcePos pos;
  friend bool operator==(const NotUntilReq&, const NotUntilReq&) = default;
};

struct Contract {
  std::string component;
  std::vector<std::string> required;
  std::vector<std::string> provided;
  std::vector<Thread> threads;
  std::vector<TimingReq> timings;
  std::vector<NotUntilReq> control_flow;

  bool requires_service(std::string_view s) const;
  bool provides_service(std::string_view s) const;
  const Thread* find_thread(std::string_view name) const;
  /// The thread activated by an RPC (or signal) on `m`, matched by service and method name.
  const Thread* entry_thread(const MethodRef& m) const;

  friend bool operator==(const Contract&, const Contract&) = default;
};

struct InterfaceMethod {
  std::string name;
  std::string args;
  friend bool operator==(const InterfaceMethod&, const InterfaceMethod&) = default;
};

struct ServiceInterface {
  std::string name;
  std::vector<InterfaceMethod> methods;
  /// nullopt = unbounded
  std::optional<int> max_clients;

  const InterfaceMethod* find_method(std::string_view name) const;
  friend bool operator==(const ServiceInterface&, const ServiceInterface&) = default;
};

using ServiceRepository = std::map<std::string, ServiceInterface>;

struct SoftwareModel {
  std::map<std::string, Contract> contracts;
  ServiceRepository services;

  const Contract& contract(std::string_view name) const;
  bool has(std::string_view name) const { return contracts.find(std::string(name)) != contracts.end(); }
  friend bool operator==(const SoftwareModel&, const SoftwareModel&) = default;
};

Contract parse_contract(std::string_view text);
std::string render_contract(const Contract& c);

ServiceRepository parse_repository(std::string_view text);
std::string render_repository(const ServiceRepository& repo);

/// Checks that every service and method a contract mentions exists in the repository
/// (method signatures compared verbatim). Throws ModelError.
void check_against_repository(const Contract& c, const ServiceRepository& repo);

SoftwareModel load_software_model(const std::vector<std::string>& contract_texts, std::string_view repository_text);

/// Deterministic structural dump used for golden-file comparisons.
std::string dump_ast(const Contract& c);

}  // namespace mcc
