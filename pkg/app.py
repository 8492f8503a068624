from decouple import config

from core import create_app

app = create_app()

if __name__ == "__main__":
    app.run(host=config('HOST', default="0.0.0.0"),
            port=config('PORT', default=5010, cast=int),
            debug=config('ENVIRONMENT', default='Development') == 'Development')
