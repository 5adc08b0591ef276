from fastapi import FastAPI, Request, HTTPException, status
from fastapi.responses import JSONResponse
from fastapi.middleware.cors import CORSMiddleware
from app.core.config import settings
from app.core.logging import setup_logging, get_logger
from app.core.exceptions import (
    INPUT_ERRORS,
    ConsistencyError,
    GroupAnalysisError,
    ReportNotFoundError,
)
from app.services.analysis_service import AnalysisService
from app.services.report_store import ReportStore
from app.api.endpoints import groups

# Setup logging
setup_logging()
logger = get_logger(__name__)

app = FastAPI(
    title=settings.APP_NAME,
    version=settings.APP_VERSION,
    description="Faithful irreducible representation analysis of finite groups",
    docs_url="/docs",
    redoc_url="/redoc",
    openapi_url="/openapi.json"
)

app.add_middleware(
    CORSMiddleware,
    allow_origins=["*"],
    allow_credentials=True,
    allow_methods=["*"],
    allow_headers=["*"],
)

app.analysis_service = AnalysisService()
app.report_store = ReportStore()

app.include_router(groups.router, prefix="/groups", tags=["Group Analysis"])

@app.get("/", summary="Root endpoint", response_description="Root endpoint of the API")
async def read_root():
    logger.info("Root endpoint accessed.")
    return {"message": "Minisocle analyzer is running!", "status": "ok", "version": settings.APP_VERSION}

@app.get("/health", summary="Health check", response_description="Health status of the API")
async def health_check():
    logger.info("Health check endpoint accessed.")
    return {"status": "healthy", "message": "API is operational"}

def _error_response(status_code: int, code: str, exc: GroupAnalysisError) -> JSONResponse:
    return JSONResponse(
        status_code=status_code,
        content={
            "message": exc.message,
            "status": "error",
            "code": code,
            "details": exc.details
        }
    )

@app.exception_handler(HTTPException)
async def http_exception_handler(request: Request, exc: HTTPException):
    logger.error(f"HTTP Exception: {exc.status_code} - {exc.detail}")
    return JSONResponse(
        status_code=exc.status_code,
        content={
            "message": exc.detail,
            "status": "error",
            "code": exc.status_code
        }
    )

@app.exception_handler(ReportNotFoundError)
async def report_not_found_exception_handler(request: Request, exc: ReportNotFoundError):
    logger.warning(f"Report Not Found Error: {exc.message}")
    return _error_response(status.HTTP_404_NOT_FOUND, "REPORT_NOT_FOUND", exc)

@app.exception_handler(ConsistencyError)
async def consistency_error_handler(request: Request, exc: ConsistencyError):
    logger.error(f"Consistency Error: {exc.message}", exc_info=True)
    return _error_response(status.HTTP_500_INTERNAL_SERVER_ERROR, "CONSISTENCY_ERROR", exc)

@app.exception_handler(GroupAnalysisError)
async def group_analysis_exception_handler(request: Request, exc: GroupAnalysisError):
    if isinstance(exc, INPUT_ERRORS):
        logger.warning(f"Input Error: {exc.message}")
        return _error_response(status.HTTP_400_BAD_REQUEST, "INVALID_INPUT", exc)
    logger.error(f"Group Analysis Error: {exc.message}", exc_info=True)
    return _error_response(status.HTTP_500_INTERNAL_SERVER_ERROR, "GROUP_ANALYSIS_ERROR", exc)

@app.on_event("startup")
async def startup_event():
    logger.info("FastAPI application startup event.")

@app.on_event("shutdown")
async def shutdown_event():
    logger.info("FastAPI application shutdown event.")
    await app.report_store.clear()
