# backend.py
"""
Flask backend for the hwtheta engine.
Run from the project root:
    python backend.py
Dependencies:
    pip install -r requirements.txt

Every POST body is JSON carrying the same text literals as the CLI, e.g.
    {"manifold": "group: Z(a)*Z(b)\\nmodule: free(1)", "expr": "(0, (e0 @ a))[b*a]"}
"""

import logging
import traceback

from flask import Flask, jsonify, request
from flask_cors import CORS

from hwtheta import __version__
from hwtheta.barbell import delta_k, realization_route, realize, sigma_invariant, theta, theta_g
from hwtheta.config import load_config
from hwtheta.errors import HWThetaError, ParseError
from hwtheta.log import setup_logging
from hwtheta.oracle import FiniteSetup, check_agreement
from hwtheta.textio import (
    format_barbell,
    format_module_elem,
    format_normal_form,
    parse_barbell,
    parse_manifold,
    parse_module_elem,
    parse_wh,
    parse_word,
)
from hwtheta.whitehead import involute, wh_equal, wh_normalize

# ============= Configuration =============
CONFIG = load_config()
setup_logging(CONFIG["log_level"])
logger = logging.getLogger("hwtheta.backend")

# oracle runs block the request; keep them bounded
MAX_ORACLE_TRIALS = 5000

# ============= App init =============
app = Flask(__name__)
CORS(app)


# ============= Helper functions =============
class BadRequest(Exception):
    pass


def body():
    data = request.get_json(force=True, silent=True)
    if not isinstance(data, dict):
        raise BadRequest("request body must be a JSON object")
    return data


def field(data, name):
    value = data.get(name)
    if value is None or not isinstance(value, str):
        raise BadRequest(f"missing string field '{name}'")
    return value


def manifold_from(data):
    return parse_manifold(field(data, "manifold"))


def nf_json(nf, **extra):
    out = {
        "normal_form": format_normal_form(nf),
        "zero": nf.is_zero,
        "entries": [{"class": str(e.key), "s": e.s, "sigma": format_module_elem(e.sigma)} for e in nf.entries],
    }
    out.update(extra)
    return out


def api(handler):
    """Map engine errors to the JSON error shape: 400 for bad input, 500 otherwise."""
    def wrapped(*args, **kwargs):
        try:
            return jsonify(handler(*args, **kwargs))
        except ParseError as e:
            return jsonify({"error": "parse error", "details": e.message, "line": e.line, "column": e.column}), 400
        except BadRequest as e:
            return jsonify({"error": "bad request", "details": str(e)}), 400
        except HWThetaError as e:
            return jsonify({"error": type(e).__name__, "details": str(e)}), 400
        except ValueError as e:
            return jsonify({"error": "invalid value", "details": str(e)}), 400
        except Exception as e:
            logger.error("unexpected failure in %s: %s", handler.__name__, e)
            return jsonify({"error": "internal error", "details": str(e), "trace": traceback.format_exc()}), 500

    wrapped.__name__ = handler.__name__
    return wrapped


# ============= Routes =============

@app.route("/api/status")
@api
def api_status():
    return {"engine": "hwtheta", "version": __version__, "seed": CONFIG["seed"], "trials": CONFIG["trials"]}


@app.route("/api/wh/normalize", methods=["POST"])
@api
def api_wh_normalize():
    data = body()
    X = manifold_from(data)
    return nf_json(wh_normalize(parse_wh(field(data, "expr"), X)))


@app.route("/api/wh/eq", methods=["POST"])
@api
def api_wh_eq():
    data = body()
    X = manifold_from(data)
    equal = wh_equal(parse_wh(field(data, "lhs"), X), parse_wh(field(data, "rhs"), X))
    return {"result": "equal" if equal else "not-equal", "equal": equal}


@app.route("/api/wh/bar", methods=["POST"])
@api
def api_wh_bar():
    data = body()
    X = manifold_from(data)
    return nf_json(wh_normalize(involute(parse_wh(field(data, "expr"), X))))


def barbell_from(data):
    if data.get("k") is not None:
        return delta_k(int(data["k"]))
    X = manifold_from(data)
    return X, parse_barbell(field(data, "barbell"), X)


@app.route("/api/barbell/theta", methods=["POST"])
@api
def api_barbell_theta():
    X, b = barbell_from(body())
    return nf_json(theta(b, X), sigma_invariant=sigma_invariant(b))


@app.route("/api/barbell/theta-g", methods=["POST"])
@api
def api_barbell_theta_g():
    X, b = barbell_from(body())
    return nf_json(theta_g(b, X), sigma_invariant=sigma_invariant(b))


@app.route("/api/barbell/deltak")
@api
def api_barbell_deltak():
    try:
        k = int(request.args.get("k", ""))
    except ValueError:
        raise BadRequest("query parameter k must be an integer") from None
    X, b = delta_k(k)
    return {"k": k, "document": format_barbell(b, X), **nf_json(theta(b, X))}


@app.route("/api/barbell/realize", methods=["POST"])
@api
def api_barbell_realize():
    data = body()
    X = manifold_from(data)
    sigma = parse_module_elem(field(data, "sigma"), X)
    b = realize(sigma, parse_word(field(data, "alpha"), X), X)
    return {"document": format_barbell(b, X), "route": realization_route(sigma, X)}


@app.route("/api/oracle/check", methods=["POST"])
@api
def api_oracle_check():
    data = body()
    try:
        m, rank = int(data.get("m", 0)), int(data.get("rank", 0))
        trials = int(data.get("trials", CONFIG["trials"]))
        seed = int(data.get("seed", CONFIG["seed"]))
    except (TypeError, ValueError):
        raise BadRequest("m, rank, trials and seed must be integers") from None
    setup = FiniteSetup(m, rank)
    if not 0 <= trials <= MAX_ORACLE_TRIALS:
        raise BadRequest(f"trials must be between 0 and {MAX_ORACLE_TRIALS}")
    report = check_agreement(setup, trials, seed, max_terms=CONFIG["random_terms"])
    return {"summary": report.summary(), "agree": report.agree, "trials": report.trials, "passed": report.passed}


# ============= Run server =============
if __name__ == "__main__":
    host, port = CONFIG["server"]["host"], CONFIG["server"]["port"]
    logger.warning("starting backend on %s:%d", host, port)
    app.run(host=host, port=port, debug=False)
