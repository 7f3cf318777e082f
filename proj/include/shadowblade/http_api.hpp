#pragma once

#include "shadowblade/service.hpp"

namespace httplib {
class Server;
}

namespace shadowblade {

// Routes, all JSON, bodies terminated by a single "\n":
//   POST   /api/targets                 {"name","host"}           201 target
//   GET    /api/targets                                           200 [target]
//   GET    /api/targets/{id}                                      200 target
//   DELETE /api/targets/{id}                                      204
//   POST   /api/targets/{id}/scans      {"tool","options","anchor_node"?}  202 job
//   GET    /api/jobs/{id}                                         200 job
//   GET    /api/targets/{id}/graph                                200 snapshot
//   GET    /api/targets/{id}/vectors                              200 [vector]
// Failures answer {"error": code, "message": text}.
void register_routes(httplib::Server& server, Service& service);

/// Runs the HTTP service until SIGINT/SIGTERM. Returns a process exit code.
int serve(const ServiceConfig& config);

} // namespace shadowblade
