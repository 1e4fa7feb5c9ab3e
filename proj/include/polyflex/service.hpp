// Stateless JSON endpoints over the core library, and an HTTP front end.
//
//   GET  /health
//   POST /build  {params}                  -> {mesh, diagnostics}
//   POST /flex   {params, max_samples}     -> trajectory (+ range)
//   POST /sample {params, s}               -> one configuration at driving value s
//
// Status codes: 400 malformed request or invalid params, 422 infeasible
// geometry (with the failing stage), 404 unknown path, 405 wrong method.
#pragma once

#include <string>

#include "polyflex/flex.hpp"

namespace polyflex {

struct ServiceOptions {
  StepControl step;
  int max_samples_cap = 2000;
  Tolerance tol;
};

struct ServiceResponse {
  int status = 200;
  std::string body;
  std::string content_type = "application/json";
};

/// The whole service as a pure function; the HTTP server only forwards here.
ServiceResponse handle_request(const std::string& method, const std::string& path,
                               const std::string& body, const ServiceOptions& opt = {});

/// Blocks until the server stops. Throws if the address cannot be bound.
void serve(const std::string& host, int port, const ServiceOptions& opt = {});

}  // namespace polyflex
