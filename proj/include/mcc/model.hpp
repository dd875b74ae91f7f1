#pragma once

#include <compare>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "mcc/dsl.hpp"

namespace mcc {

/// A thread or task named within its component, printed as `Component.name`.
struct QualifiedName {
  std::string component;
  std::string name;

  std::string str() const { return component + "." + name; }
  static QualifiedName parse(std::string_view text);
  friend auto operator<=>(const QualifiedName&, const QualifiedName&) = default;
};

using ThreadId = QualifiedName;
using TaskId = QualifiedName;

/// (client, service, provider)
struct Connection {
  std::string client;
  std::string service;
  std::string provider;

  std::string str() const { return client + " -> " + service + " -> " + provider; }
  friend auto operator<=>(const Connection&, const Connection&) = default;
};

/// All resources are scheduled static-priority preemptive.
struct Resource {
  std::string name;
  std::string type;
  friend bool operator==(const Resource&, const Resource&) = default;
};

struct PlatformModel {
  std::vector<Resource> resources;  // sorted by name

  const Resource* find(std::string_view name) const;
  friend bool operator==(const PlatformModel&, const PlatformModel&) = default;
};

/// Rank 0 is the highest priority.
using PriorityOrder = std::vector<ThreadId>;

struct Configuration {
  std::set<std::string> components;
  std::set<Connection> connections;
  std::map<TaskId, std::string> mapping;
  PriorityOrder priorities;

  /// Provider connected to (client, service), if any.
  const std::string* provider_of(std::string_view client, std::string_view service) const;
  std::optional<std::size_t> rank_of(const ThreadId& t) const;

  friend bool operator==(const Configuration&, const Configuration&) = default;
};

struct SystemModel {
  SoftwareModel software;
  PlatformModel platform;
  Configuration config;
};

enum class ChangeType { Add, Remove, Update };

struct UpdateRequest {
  ChangeType type = ChangeType::Add;
  /// For Remove only `contract.component` is consulted.
  Contract contract;
};

/// Conditions 1-4 are the structural well-formedness rules; MaxClients and
/// StrictOrder are the two additional checks.
enum class Condition {
  ConnectionTyping = 1,
  UniqueProvider = 2,
  MappingType = 3,
  ThreadPriority = 4,
  MaxClients = 5,
  StrictOrder = 6,
};

std::string condition_label(Condition c);

struct Violation {
  Condition condition;
  std::string detail;

  std::string str() const { return condition_label(condition) + ": " + detail; }
  friend bool operator==(const Violation&, const Violation&) = default;
};

/// `provider` can serve `service` to `client`: distinct components, the service is
/// required/provided respectively, and every method the client invokes on it has an
/// entry thread in the provider with the same signature.
bool compatible_provider(const Contract& client, const Contract& provider, std::string_view service);

/// Threads of the given components in (component, thread) order.
std::vector<ThreadId> threads_of(const SoftwareModel& software, const std::set<std::string>& components);

struct TaskRef {
  TaskId id;
  const TaskStep* step;
};

/// Tasks of the given components in (component, task) order.
std::vector<TaskRef> tasks_of(const SoftwareModel& software, const std::set<std::string>& components);

/// Empty result means well-formed. Names that do not resolve throw ModelError.
std::vector<Violation> check_well_formed(const Configuration& cfg, const SoftwareModel& software,
                                         const PlatformModel& platform);

SoftwareModel apply_update(const SoftwareModel& software, const UpdateRequest& req);

PlatformModel parse_platform(std::string_view text);
std::string render_platform(const PlatformModel& p);

Configuration parse_configuration(std::string_view text);
std::string render_configuration(const Configuration& cfg);

}  // namespace mcc
